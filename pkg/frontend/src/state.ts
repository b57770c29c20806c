/** View state and the submit/toggle/select controller.
 *
 * At most one /process request is in flight: a new submit aborts the
 * previous one. Toggling expansion re-issues the last text with the
 * flag flipped.
 */

import { processText } from "./api";
import type { ProcessResponse } from "./types";

export interface ViewState {
  inputText: string;
  expandEnabled: boolean;
  topK: number;
  response: ProcessResponse | null;
  selectedOccurrence: string | null;
  loading: boolean;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    inputText: "",
    expandEnabled: false,
    topK: 10,
    response: null,
    selectedOccurrence: null,
    loading: false,
    error: null,
  };
}

export class Controller {
  state: ViewState = initialState();
  private inflight: AbortController | null = null;

  constructor(private onChange: (state: ViewState) => void) {}

  private emit(): void {
    this.onChange(this.state);
  }

  async submit(text: string): Promise<void> {
    if (!text.trim()) return;
    if (this.inflight) this.inflight.abort();
    const controller = new AbortController();
    this.inflight = controller;
    this.state = {
      ...this.state,
      inputText: text,
      loading: true,
      error: null,
      selectedOccurrence: null,
    };
    this.emit();
    try {
      const response = await processText(
        text,
        this.state.expandEnabled,
        this.state.topK,
        controller.signal,
      );
      if (this.inflight !== controller) return; // superseded
      this.state = { ...this.state, response, loading: false };
    } catch (err) {
      if (controller.signal.aborted) return;
      this.state = {
        ...this.state,
        response: null,
        loading: false,
        error: err instanceof Error ? err.message : String(err),
      };
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
    this.emit();
  }

  /** Flip expansion; re-issues the request when a text is loaded. */
  async toggleExpand(enabled: boolean): Promise<void> {
    if (this.state.expandEnabled === enabled) return;
    this.state = { ...this.state, expandEnabled: enabled };
    this.emit();
    if (this.state.inputText.trim()) {
      await this.submit(this.state.inputText);
    }
  }

  selectOccurrence(key: string | null): void {
    this.state = { ...this.state, selectedOccurrence: key };
    this.emit();
  }
}
