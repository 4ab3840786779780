// Pure render-model computation. Everything displayed is derived from the
// server's state message; no game rule is re-implemented here.

import type { GameState, Hint } from "./api.js";

export interface CellView {
  index: number;
  letter: string;
  prev: boolean;
  cur: boolean;
  pending: boolean;
  allowed: boolean; // server-sent window membership (constraint shading)
  hint: "winning" | "plain" | null;
}

export interface BoardView {
  u: CellView[];
  v: CellView[];
  roundsUsed: number;
  rounds: number;
  alternationsUsed: number;
  alternations: number | null;
  turn: string;
  yourTurn: boolean;
  banner: string | null;
  hintEnabled: boolean;
}

function row(side: "u" | "v", state: GameState, hint: Hint | null): CellView[] {
  const word = state.words[side];
  const coord = side === "u" ? 0 : 1;
  const allowed = side === "u" ? state.allowedU : state.allowedV;
  const allowedSet = new Set(allowed ?? []);
  const cells: CellView[] = [];
  for (let i = 0; i < word.length; i++) {
    cells.push({
      index: i,
      letter: word[i],
      prev: state.pebbles.previous?.[coord] === i,
      cur: state.pebbles.current?.[coord] === i,
      pending: state.pending != null && state.pending.side === side
        && state.pending.position === i,
      allowed: allowed == null ? true : allowedSet.has(i),
      hint: hint && hint.side === side && hint.position === i
        ? (hint.winning ? "winning" : "plain")
        : null,
    });
  }
  return cells;
}

export function boardView(state: GameState, hint: Hint | null = null): BoardView {
  const over = state.winner != null;
  return {
    u: row("u", state, hint),
    v: row("v", state, hint),
    roundsUsed: state.roundsUsed,
    rounds: state.rounds,
    alternationsUsed: state.alternationsUsed,
    alternations: state.alternations ?? null,
    turn: state.turn,
    yourTurn: !over && state.turn === state.humanRole,
    banner: over ? `${state.winner} wins: ${state.reason ?? ""}` : null,
    hintEnabled: !over && state.turn === state.humanRole,
  };
}

export interface NewGameForm {
  u: string;
  v: string;
  s: number;
  m: number | null;
  sig: string;
  humanRole: string;
}

// Client-side validation covers only input shape; game-size limits and
// signature names are the server's call.
export function validateNewGame(form: NewGameForm): string | null {
  if (!form.u || !form.v) return "both words must be non-empty";
  if (!Number.isInteger(form.s) || form.s < 1) return "rounds must be at least 1";
  if (form.m !== null && (!Number.isInteger(form.m) || form.m < 0)) {
    return "alternation budget must be a natural number (or blank)";
  }
  if (form.humanRole !== "spoiler" && form.humanRole !== "duplicator") {
    return "role must be spoiler or duplicator";
  }
  return null;
}
