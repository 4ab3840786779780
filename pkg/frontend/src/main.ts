// DOM wiring: one in-flight request per session, inputs disabled while a
// request runs, every legality verdict rendered straight from the server.

import { ApiError, Client, GameState, Hint } from "./api.js";
import { boardView, validateNewGame } from "./view.js";

const client = new Client("");

let gameId: string | null = null;
let state: GameState | null = null;
let hint: Hint | null = null;
let busy = false;

function el<T extends HTMLElement>(id: string): T {
  const got = document.getElementById(id);
  if (!got) throw new Error(`missing element #${id}`);
  return got as T;
}

function setMessage(text: string, kind: "info" | "error" = "info"): void {
  const box = el<HTMLDivElement>("message");
  box.textContent = text;
  box.className = kind;
}

function renderRow(side: "u" | "v", cells: ReturnType<typeof boardView>["u"]): HTMLElement {
  const rowEl = document.createElement("div");
  rowEl.className = "row";
  const label = document.createElement("span");
  label.className = "rowlabel";
  label.textContent = side;
  rowEl.appendChild(label);
  for (const cell of cells) {
    const btn = document.createElement("button");
    btn.className = "cell";
    if (!cell.allowed) btn.classList.add("blocked");
    if (cell.prev) btn.classList.add("prev");
    if (cell.cur) btn.classList.add("cur");
    if (cell.pending) btn.classList.add("pending");
    if (cell.hint === "winning") btn.classList.add("hint-win");
    if (cell.hint === "plain") btn.classList.add("hint-plain");
    btn.textContent = cell.letter;
    btn.title = `${side}[${cell.index}]`;
    btn.addEventListener("click", () => submitMove(side, cell.index, btn));
    rowEl.appendChild(btn);
  }
  const idx = document.createElement("div");
  idx.className = "indices";
  idx.textContent = cells.map((c) => c.index).join(" ");
  return rowEl;
}

function render(): void {
  const board = el<HTMLDivElement>("board");
  board.innerHTML = "";
  if (!state) return;
  const view = boardView(state, hint);
  board.appendChild(renderRow("u", view.u));
  board.appendChild(renderRow("v", view.v));
  el<HTMLSpanElement>("rounds").textContent = `${view.roundsUsed}/${view.rounds}`;
  el<HTMLSpanElement>("alts").textContent = view.alternations === null
    ? `${view.alternationsUsed}/∞`
    : `${view.alternationsUsed}/${view.alternations}`;
  el<HTMLSpanElement>("turn").textContent = view.banner ? "—" : view.turn;
  el<HTMLButtonElement>("hintBtn").disabled = !view.hintEnabled || busy;
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = view.banner ?? "";
  banner.style.display = view.banner ? "block" : "none";
}

async function submitMove(side: "u" | "v", position: number, btn: HTMLButtonElement):
    Promise<void> {
  if (!gameId || busy || !state || state.winner) return;
  busy = true;
  try {
    const resp = await client.postMove(gameId, side, position);
    state = resp.state;
    hint = null;
    setMessage(resp.verdict ? `game over` : "");
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      btn.classList.add("shake");
      setTimeout(() => btn.classList.remove("shake"), 400);
      setMessage(err.detail, "error");
    } else {
      setMessage(String(err), "error");
    }
  } finally {
    busy = false;
    render();
  }
}

async function newGame(): Promise<void> {
  const mRaw = el<HTMLInputElement>("m").value.trim();
  const form = {
    u: el<HTMLInputElement>("u").value.trim(),
    v: el<HTMLInputElement>("v").value.trim(),
    s: Number(el<HTMLInputElement>("s").value),
    m: mRaw === "" ? null : Number(mRaw),
    sig: el<HTMLInputElement>("sig").value.trim() || "less",
    humanRole: el<HTMLSelectElement>("role").value,
  };
  const complaint = validateNewGame(form);
  if (complaint) {
    setMessage(complaint, "error");
    return;
  }
  busy = true;
  try {
    const resp = await client.createGame(form);
    gameId = resp.id;
    state = resp.state;
    hint = null;
    setMessage(`playing as ${form.humanRole}`);
  } catch (err) {
    setMessage(err instanceof ApiError ? err.detail : String(err), "error");
  } finally {
    busy = false;
    render();
  }
}

async function requestHint(): Promise<void> {
  if (!gameId || busy) return;
  busy = true;
  try {
    hint = await client.getHint(gameId);
    setMessage(hint.winning ? "hint: certified winning" : "hint: best available");
  } catch (err) {
    setMessage(err instanceof ApiError ? err.detail : String(err), "error");
  } finally {
    busy = false;
    render();
  }
}

export function boot(): void {
  el<HTMLButtonElement>("newGameBtn").addEventListener("click", () => void newGame());
  el<HTMLButtonElement>("hintBtn").addEventListener("click", () => void requestHint());
  render();
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  boot();
}
