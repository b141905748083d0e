/**
 * DOM application: renders the session, turns pointer gestures into span
 * selections, collects one correction per turn, and round-trips feedback
 * through the service. Every effort counter shown comes verbatim from the
 * last server response.
 */

import { ApiError, type SessionApi } from "./api.js";
import {
  applyServerView,
  buildFeedbackRequest,
  canSubmit,
  clearSpan,
  correctionRank,
  initialState,
  tokenSelected,
  trySelectSpan,
} from "./state.js";
import type { ViewState } from "./types.js";

export interface App {
  readonly root: HTMLElement;
  getState(): ViewState;
  start(text: string): Promise<void>;
  selectSpan(start: number, end: number): boolean;
  toggleToken(index: number): void;
  beginCorrection(tokenIndex: number): void;
  typeCorrection(text: string): void;
  submitTurn(): Promise<void>;
  accept(): Promise<void>;
}

export function createApp(root: HTMLElement, client: SessionApi): App {
  let state = initialState();
  let dragStart: number | null = null;

  root.innerHTML = `
    <div class="session">
      <form class="start-form">
        <input class="source-input" placeholder="source sentence" aria-label="source sentence" />
        <button type="submit" class="start-button">Start session</button>
      </form>
      <p class="source-text"></p>
      <div class="hypothesis" aria-label="hypothesis"></div>
      <div class="correction-box" hidden>
        <span class="correction-label"></span>
        <input class="correction-input" aria-label="correction word" />
        <span class="correction-chars" title="keystrokes this correction will cost"></span>
      </div>
      <div class="counters">
        words typed <b class="counter-ws">0</b> ·
        keystrokes <b class="counter-ks">0</b> ·
        mouse actions <b class="counter-ma">0</b>
      </div>
      <div class="controls">
        <button class="submit-button" disabled>Submit turn</button>
        <button class="accept-button" disabled>Accept translation</button>
      </div>
      <div class="banner" role="alert" hidden></div>
      <div class="final" hidden></div>
    </div>
  `;

  const el = {
    form: root.querySelector(".start-form") as HTMLFormElement,
    sourceInput: root.querySelector(".source-input") as HTMLInputElement,
    sourceText: root.querySelector(".source-text") as HTMLElement,
    hypothesis: root.querySelector(".hypothesis") as HTMLElement,
    correctionBox: root.querySelector(".correction-box") as HTMLElement,
    correctionLabel: root.querySelector(".correction-label") as HTMLElement,
    correctionInput: root.querySelector(".correction-input") as HTMLInputElement,
    correctionChars: root.querySelector(".correction-chars") as HTMLElement,
    ws: root.querySelector(".counter-ws") as HTMLElement,
    ks: root.querySelector(".counter-ks") as HTMLElement,
    ma: root.querySelector(".counter-ma") as HTMLElement,
    submit: root.querySelector(".submit-button") as HTMLButtonElement,
    acceptButton: root.querySelector(".accept-button") as HTMLButtonElement,
    banner: root.querySelector(".banner") as HTMLElement,
    final: root.querySelector(".final") as HTMLElement,
  };

  function notice(text: string | null): void {
    state = { ...state, notice: text };
    render();
  }

  function render(): void {
    el.sourceText.textContent = state.sourceText;
    el.hypothesis.replaceChildren(
      ...state.hypothesis.map((token, index) => {
        const chip = document.createElement("span");
        chip.className = "token";
        chip.textContent = token;
        chip.dataset.index = String(index);
        if (tokenSelected(state.spans, index)) {
          chip.classList.add("selected");
        }
        if (state.correction?.tokenIndex === index) {
          chip.classList.add("correcting");
        }
        return chip;
      }),
    );
    if (state.correction) {
      el.correctionBox.hidden = false;
      const target = state.hypothesis[state.correction.tokenIndex];
      el.correctionLabel.textContent = `replace “${target ?? ""}” with:`;
      if (el.correctionInput.value !== state.correction.text) {
        el.correctionInput.value = state.correction.text;
      }
      el.correctionChars.textContent = `${state.correction.text.trim().length} keystrokes`;
    } else {
      el.correctionBox.hidden = true;
      el.correctionInput.value = "";
    }
    el.ws.textContent = String(state.counters.ws);
    el.ks.textContent = String(state.counters.ks);
    el.ma.textContent = String(state.counters.ma);
    el.submit.disabled = !canSubmit(state);
    el.acceptButton.disabled =
      state.accepted || state.sessionId === null || state.connection === "pending";
    el.banner.hidden = state.notice === null;
    el.banner.textContent = state.notice ?? "";
    if (state.accepted && state.ratios) {
      el.final.hidden = false;
      el.final.innerHTML =
        `<h3>Translation accepted</h3>` +
        `<p class="final-totals">effort: ${state.counters.ws} words, ` +
        `${state.counters.ks} keystrokes, ${state.counters.ma} mouse actions</p>` +
        `<p class="final-ratios">WSR ${state.ratios.wsr.toFixed(2)} · ` +
        `KSR ${state.ratios.ksr.toFixed(2)} · MAR ${state.ratios.mar.toFixed(2)}</p>`;
    } else {
      el.final.hidden = true;
    }
  }

  async function guard(work: () => Promise<void>): Promise<void> {
    if (state.connection === "pending") {
      return;
    }
    state = { ...state, connection: "pending", notice: null };
    render();
    try {
      await work();
    } catch (err) {
      const detail =
        err instanceof ApiError ? err.detail : "service unreachable, try again";
      // keep the user's selection; just surface the problem
      state = { ...state, connection: "error" };
      notice(detail);
      return;
    }
    render();
  }

  const app: App = {
    root,

    getState: () => state,

    async start(text: string): Promise<void> {
      await guard(async () => {
        const view = await client.createSession(text);
        state = applyServerView(initialState(), view);
      });
    },

    selectSpan(start: number, end: number): boolean {
      if (state.accepted) {
        return false;
      }
      const result = trySelectSpan(state.spans, start, end, state.hypothesis.length);
      if (!result.ok) {
        notice(result.reason);
        return false;
      }
      state = { ...state, spans: result.spans, notice: null };
      render();
      return true;
    },

    toggleToken(index: number): void {
      if (tokenSelected(state.spans, index)) {
        state = { ...state, spans: clearSpan(state.spans, index) };
        render();
      } else {
        app.selectSpan(index, index);
      }
    },

    beginCorrection(tokenIndex: number): void {
      if (state.accepted) {
        return;
      }
      if (correctionRank(state.spans, tokenIndex) === null) {
        notice("validated words cannot be corrected");
        return;
      }
      state = { ...state, correction: { tokenIndex, text: "" }, notice: null };
      render();
      el.correctionInput.focus();
    },

    typeCorrection(text: string): void {
      if (!state.correction) {
        return;
      }
      state = { ...state, correction: { ...state.correction, text } };
      render();
    },

    async submitTurn(): Promise<void> {
      const request = buildFeedbackRequest(state);
      if (!request || !state.sessionId) {
        return;
      }
      await guard(async () => {
        const view = await client.submitFeedback(state.sessionId as string, request);
        state = applyServerView(state, view);
      });
    },

    async accept(): Promise<void> {
      if (!state.sessionId || state.accepted) {
        return;
      }
      await guard(async () => {
        const view = await client.accept(state.sessionId as string);
        state = applyServerView(state, view);
      });
    },
  };

  // --- event wiring -------------------------------------------------------

  el.form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = el.sourceInput.value.trim();
    if (text) {
      void app.start(text);
    }
  });

  function tokenIndex(target: EventTarget | null): number | null {
    if (target instanceof HTMLElement && target.classList.contains("token")) {
      return Number(target.dataset.index);
    }
    return null;
  }

  el.hypothesis.addEventListener("mousedown", (event) => {
    dragStart = tokenIndex(event.target);
  });

  el.hypothesis.addEventListener("mouseup", (event) => {
    const end = tokenIndex(event.target);
    if (dragStart !== null && end !== null) {
      if (dragStart === end) {
        app.toggleToken(end);
      } else {
        app.selectSpan(dragStart, end);
      }
    }
    dragStart = null;
  });

  el.hypothesis.addEventListener("dblclick", (event) => {
    const index = tokenIndex(event.target);
    if (index !== null) {
      app.beginCorrection(index);
    }
  });

  el.correctionInput.addEventListener("input", () => {
    app.typeCorrection(el.correctionInput.value);
  });

  el.submit.addEventListener("click", () => void app.submitTurn());
  el.acceptButton.addEventListener("click", () => void app.accept());

  render();
  return app;
}
