/** Boot: wire the form, render on state changes, anchor the popup. */

import { buildSegments } from "./segments";
import { Controller } from "./state";
import { renderGlossaryTable, renderPopup, renderText } from "./view";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function boot(): Controller {
  const input = byId<HTMLTextAreaElement>("input-text");
  const expandToggle = byId<HTMLInputElement>("expand-toggle");
  const submitButton = byId<HTMLButtonElement>("submit");
  const output = byId<HTMLDivElement>("output");
  const glossaryTable = byId<HTMLTableElement>("glossary");
  const banner = byId<HTMLDivElement>("banner");

  let popup: HTMLElement | null = null;
  const closePopup = () => {
    popup?.remove();
    popup = null;
  };

  const controller = new Controller((state) => {
    banner.textContent = state.error ?? (state.loading ? "working…" : "");
    banner.className = state.error ? "banner error" : "banner";
    closePopup();
    if (!state.response) {
      if (!state.loading) {
        output.textContent = "";
        glossaryTable.tBodies[0]?.remove();
      }
      return;
    }
    renderText(output, state.inputText, state.response, (key) => {
      controller.selectOccurrence(key);
    });
    renderGlossaryTable(glossaryTable, state.response);

    if (state.selectedOccurrence) {
      const segment = buildSegments(state.inputText, state.response).find(
        (s) => s.kind === "highlight" && s.info.key === state.selectedOccurrence,
      );
      const anchor = output.querySelector<HTMLElement>(
        `[data-occurrence="${CSS.escape(state.selectedOccurrence)}"]`,
      );
      if (segment && segment.kind === "highlight" && anchor) {
        popup = renderPopup(segment.info);
        popup.style.position = "absolute";
        const rect = anchor.getBoundingClientRect();
        popup.style.left = `${rect.left + window.scrollX}px`;
        popup.style.top = `${rect.bottom + window.scrollY + 4}px`;
        document.body.appendChild(popup);
      }
    }
  });

  submitButton.addEventListener("click", () => {
    void controller.submit(input.value);
  });
  expandToggle.addEventListener("change", () => {
    void controller.toggleExpand(expandToggle.checked);
  });
  document.addEventListener("click", (event) => {
    if (popup && !popup.contains(event.target as Node)) {
      controller.selectOccurrence(null);
    }
  });
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("input-text")) {
  boot();
}
