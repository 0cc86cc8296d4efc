/**
 * Interactive session driver: create a table, follow the event stream, ask
 * the UI (or a scripted policy) for the human's actions, and keep the model
 * reconciled against the server's views.
 *
 * Concurrency model: a single logical event loop with exactly one action in
 * flight at a time. One persistent stream consumer applies events strictly
 * in sequence order (reopening the stream with the last seen sequence number
 * after a capped exponential backoff, then refetching the view so nothing is
 * guessed); the action driver submits the human's moves and reconciles the
 * returned views. Sequence numbers dedupe the two channels.
 */

import {
  ServiceClient,
  ServiceError,
  type GameEvent,
  type SessionOptions,
} from "./api.js";
import {
  TableViewModel,
  UIAction,
  applyEvent,
  freshModel,
  isMyTurn,
  reconcile,
  roundSummaryOf,
  shiftAnimation,
  withConnection,
  withError,
} from "./model.js";

export interface SessionHooks {
  /**
   * Decide the human's action whenever the table waits on them. Returning
   * null leaves the table (the session is dropped server-side).
   */
  policy(model: TableViewModel): UIAction | null | Promise<UIAction | null>;
  /** Called after every model change; drive rendering from here. */
  onModel?(model: TableViewModel): void;
  /** Called before each stream connect, with its abort controller. */
  onConnect?(attempt: number, controller: AbortController): void;
  /** Injectable backoff sleeper (tests pass an instant one). */
  sleep?(ms: number): Promise<void>;
}

export interface SessionResult {
  session: string;
  model: TableViewModel;
  /** Actions submitted (each counted once, including rejected ones). */
  submissions: number;
  /** Server rejections observed (409 stale turn / 422 illegal). */
  rejections: ServiceError[];
  /** Times the event stream was reopened after a failure. */
  reconnects: number;
  /** Sequence numbers of events applied from the stream, in order. */
  appliedSeqs: number[];
  /** True when the human left before the game finished. */
  abandoned: boolean;
}

const BACKOFF_START_MS = 50;
const BACKOFF_CAP_MS = 2_000;
const IDLE_RECHECK_MS = 500;

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

function isAbort(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

export async function sessionLoop(
  client: ServiceClient,
  options: SessionOptions,
  hooks: SessionHooks,
  maxSteps = 100_000,
): Promise<SessionResult> {
  const sleep = hooks.sleep ?? defaultSleep;
  const created = await client.createSession(options);
  const session = created.session;
  let model = freshModel(created.view, "live");
  const result: SessionResult = {
    session,
    model,
    submissions: 0,
    rejections: [],
    reconnects: 0,
    appliedSeqs: [],
    abandoned: false,
  };

  let waiters: Array<() => void> = [];
  // Accessors instead of direct reads where control flow spans an await:
  // `model` is reassigned by emit, which static narrowing cannot see.
  const current = (): TableViewModel => model;
  const emit = (next: TableViewModel): void => {
    model = next;
    result.model = next;
    hooks.onModel?.(next);
    const woken = waiters;
    waiters = [];
    for (const wake of woken) {
      wake();
    }
  };

  const modelChanged = (): Promise<void> =>
    new Promise((resolve) => {
      waiters.push(resolve);
    });

  const drainAnimations = (): void => {
    while (model.animationQueue.length > 0) {
      emit(shiftAnimation(model));
    }
  };

  // Trick sweeps and round summaries are captured exactly once no matter
  // which channel delivers the event first. Action responses routinely jump
  // the view past round boundaries (reconcile adopts the final view without
  // replaying events), so these side effects must come from the event list.
  let lastAnimatedSeq = 0;
  let lastSummarySeq = 0;
  const absorbEvents = (events: GameEvent[]): void => {
    const sweeps = events.filter(
      (event) => event.type === "trick" && event.seq > lastAnimatedSeq,
    );
    if (sweeps.length > 0) {
      lastAnimatedSeq = sweeps[sweeps.length - 1].seq;
      emit({
        ...model,
        animationQueue: [...model.animationQueue, ...sweeps],
      });
      drainAnimations();
    }
    const rounds = events.filter(
      (event) => event.type === "round" && event.seq > lastSummarySeq,
    );
    if (rounds.length > 0) {
      const latest = rounds[rounds.length - 1];
      lastSummarySeq = latest.seq;
      emit({ ...model, lastRound: roundSummaryOf(latest) });
    }
  };

  let leaving = false;
  let streamController: AbortController | null = null;
  const abortStream = (): void => {
    streamController?.abort();
  };

  const consumeStream = async (): Promise<void> => {
    let backoff = BACKOFF_START_MS;
    let attempt = 0;
    while (!leaving && current().view.phase !== "done") {
      const controller = new AbortController();
      streamController = controller;
      hooks.onConnect?.(attempt, controller);
      attempt += 1;
      try {
        const stream = client.eventStream(
          session,
          model.view.seq,
          controller.signal,
        );
        for await (const event of stream) {
          backoff = BACKOFF_START_MS;
          absorbEvents([event]);
          if (event.seq === model.view.seq + 1) {
            emit(applyEvent(model, event));
            result.appliedSeqs.push(event.seq);
          } else if (event.seq > model.view.seq) {
            // Gap: adopt the authoritative view instead of guessing.
            emit(reconcile(model, await client.view(session)));
          }
          if (current().view.phase === "done") {
            return;
          }
        }
        if (leaving || current().view.phase === "done") {
          return;
        }
        // Stream closed cleanly but the game goes on; reconnect at once.
      } catch (err) {
        if (leaving) {
          return;
        }
        if (!isAbort(err) && !(err instanceof ServiceError) && !isNetwork(err)) {
          throw err;
        }
        result.reconnects += 1;
        emit(withConnection(model, "reconnecting"));
        await sleep(backoff);
        backoff = Math.min(backoff * 2, BACKOFF_CAP_MS);
      }
      if (leaving) {
        return;
      }
      // Connection loss (or an idle close): state is refetched, never assumed.
      emit(withConnection(model, "live"));
      emit(reconcile(model, await client.view(session)));
    }
  };

  const submit = async (action: UIAction): Promise<void> => {
    const seq = model.view.seq;
    result.submissions += 1;
    try {
      const outcome =
        action.kind === "bid"
          ? await client.bid(session, seq, action.bid)
          : action.kind === "blind"
            ? await client.blindChoice(session, seq, action.choice)
            : await client.card(session, seq, action.card);
      absorbEvents(outcome.events);
      emit(reconcile(model, outcome.view));
    } catch (err) {
      if (
        err instanceof ServiceError &&
        (err.status === 409 || err.status === 422)
      ) {
        // Rejected: surface the reason inline, refetch the truth, move on.
        result.rejections.push(err);
        emit(withError(model, err.message));
        emit(reconcile(model, await client.view(session)));
        return;
      }
      throw err;
    }
  };

  emit(model);
  let streamFailure: unknown = null;
  const streaming = consumeStream().catch((err) => {
    if (!leaving) {
      streamFailure = err;
    }
  });

  let steps = 0;
  while (current().view.phase !== "done") {
    if (streamFailure !== null) {
      throw streamFailure;
    }
    if ((steps += 1) > maxSteps) {
      leaving = true;
      abortStream();
      throw new Error(`session loop exceeded ${maxSteps} steps`);
    }
    if (isMyTurn(model)) {
      const action = await hooks.policy(model);
      if (action === null) {
        leaving = true;
        result.abandoned = true;
        abortStream();
        await client.close(session);
        emit(withConnection(model, "closed"));
        await streaming;
        return result;
      }
      await submit(action);
      drainAnimations();
      continue;
    }
    // Wait for the stream to move the model; recheck the server on a slow
    // timer so a silent stall can never wedge the table.
    const woke = await Promise.race([
      modelChanged().then(() => true),
      sleep(IDLE_RECHECK_MS).then(() => false),
    ]);
    if (!woke && current().view.phase !== "done" && !isMyTurn(current())) {
      emit(reconcile(model, await client.view(session)));
    }
  }
  leaving = true;
  abortStream();
  await streaming;
  emit(withConnection(model, "closed"));
  return result;
}

function isNetwork(err: unknown): boolean {
  // fetch surfaces connection failures as TypeError in both browsers and node
  return err instanceof TypeError;
}
