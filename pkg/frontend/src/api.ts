// Thin typed client for the game service. All rules live server-side; this
// module only marshals requests and surfaces responses.

export interface Pebbles {
  previous: number[] | null;
  current: number[] | null;
}

export interface GameState {
  words: { u: string; v: string };
  pebbles: Pebbles;
  roundsUsed: number;
  alternationsUsed: number;
  turn: string;
  winner?: string | null;
  reason?: string | null;
  pending?: { side: string; position: number } | null;
  humanRole: string;
  rounds: number;
  alternations?: number | null;
  allowedU?: number[] | null;
  allowedV?: number[] | null;
}

export interface CreateGameRequest {
  u: string;
  v: string;
  s: number;
  m: number | null;
  sig: string;
  humanRole: string;
}

export interface Hint {
  side: string;
  position: number;
  winning: boolean;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(detail);
  }
}

async function expectJson(resp: Response): Promise<any> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return resp.json();
}

export class Client {
  constructor(private base: string = "") {}

  async createGame(req: CreateGameRequest): Promise<{ id: string; state: GameState }> {
    const resp = await fetch(`${this.base}/games`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
    return expectJson(resp);
  }

  async getState(id: string): Promise<GameState> {
    const resp = await fetch(`${this.base}/games/${id}`);
    const body = await expectJson(resp);
    return body.state;
  }

  // Moves are always submitted as clicked; the server is the only judge of
  // legality and replies 422 with a reason for anything illegal.
  async postMove(id: string, side: string, position: number):
      Promise<{ state: GameState; verdict?: { winner: string; reason?: string } | null }> {
    const resp = await fetch(`${this.base}/games/${id}/moves`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ side, position }),
    });
    return expectJson(resp);
  }

  async getHint(id: string): Promise<Hint> {
    const resp = await fetch(`${this.base}/games/${id}/hint`);
    return expectJson(resp);
  }
}
