/** DOM rendering: highlighted text, the click popup, the glossary table. */

import { buildPopupModel, buildSegments, type HighlightInfo } from "./segments";
import type { ProcessResponse } from "./types";

export function renderText(
  container: HTMLElement,
  text: string,
  response: ProcessResponse,
  onSelect: (key: string) => void,
): void {
  container.textContent = "";
  for (const segment of buildSegments(text, response)) {
    if (segment.kind === "plain") {
      container.appendChild(document.createTextNode(segment.text));
      continue;
    }
    const mark = document.createElement("mark");
    mark.className = segment.info.pair
      ? "acr acr-local"
      : segment.info.expansion
        ? "acr acr-expanded"
        : "acr acr-bare";
    mark.textContent = segment.text;
    mark.dataset.occurrence = segment.info.key;
    mark.addEventListener("click", (event) => {
      event.stopPropagation();
      onSelect(segment.info.key);
    });
    container.appendChild(mark);
  }
}

export function renderPopup(info: HighlightInfo): HTMLElement {
  const model = buildPopupModel(info);
  const popup = document.createElement("div");
  popup.className = "popup";
  popup.dataset.occurrence = info.key;

  const title = document.createElement("div");
  title.className = "popup-title";
  title.textContent = model.longForm
    ? `${model.acronym} = ${model.longForm}`
    : `${model.acronym}: no local definition`;
  popup.appendChild(title);

  if (model.provenance) {
    const provenance = document.createElement("div");
    provenance.className = "popup-provenance";
    provenance.textContent = model.provenance;
    popup.appendChild(provenance);
  }

  if (model.candidates.length > 0) {
    const list = document.createElement("ol");
    list.className = "popup-candidates";
    const rows = model.candidates.map((candidate) => {
      const item = document.createElement("li");
      const score = document.createElement("span");
      score.className = "score";
      score.textContent = candidate.score.toFixed(3);
      item.appendChild(score);
      item.appendChild(document.createTextNode(` ${candidate.long_form}`));
      return item;
    });
    rows.slice(0, model.previewCount).forEach((row) => list.appendChild(row));
    popup.appendChild(list);

    if (rows.length > model.previewCount) {
      const expander = document.createElement("button");
      expander.className = "popup-show-all";
      expander.type = "button";
      expander.textContent = `show all ${rows.length}`;
      expander.addEventListener("click", (event) => {
        event.stopPropagation();
        rows.slice(model.previewCount).forEach((row) => list.appendChild(row));
        expander.remove();
      });
      popup.appendChild(expander);
    }
  }
  return popup;
}

export function renderGlossaryTable(
  table: HTMLTableElement,
  response: ProcessResponse,
): void {
  table.querySelector("tbody")?.remove();
  const body = document.createElement("tbody");
  for (const row of response.glossary) {
    const tr = document.createElement("tr");
    for (const value of [row.acronym, row.long_form ?? "—", row.source ?? ""]) {
      const td = document.createElement("td");
      td.textContent = value;
      tr.appendChild(td);
    }
    body.appendChild(tr);
  }
  table.appendChild(body);
}
