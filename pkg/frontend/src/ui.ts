import { qualityViewsBadge } from "./badge.js";
import { sortedBars, ExplorerState } from "./state.js";
import type {
  ChoiceVariable,
  DesignSpaceResponse,
  PairVariable,
  RangeVariable,
  RoomConfigDraft,
  Variable,
} from "./types.js";

// All displayed numbers go through this: values are rendered verbatim from
// the service response except for fixed 3-decimal display rounding.
export function fmt(value: number): string {
  return value.toFixed(3);
}

const VIEW_METRICS = ["view_range", "view_depth", "view_factor"] as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function defaultDraft(space: DesignSpaceResponse): RoomConfigDraft {
  const by: Record<string, Variable> = {};
  for (const v of space.variables) by[v.name] = v;
  const dims = by["dimensions"] as PairVariable;
  return {
    orientation: (by["orientation"] as ChoiceVariable).default,
    width: dims.default[0],
    depth: dims.default[1],
    reflectance: (by["reflectance"] as RangeVariable).default,
    shading: (by["shading"] as ChoiceVariable).default,
    sill_height: (by["sill_height"] as RangeVariable).default,
    window_height: (by["window_height"] as RangeVariable).default,
    divisions: (by["divisions"] as ChoiceVariable).default,
  };
}

function choiceControl(
  variable: ChoiceVariable,
  value: string,
  onInput: (v: string) => void,
): HTMLElement {
  const wrap = el("div", "control");
  wrap.appendChild(el("label", "control-label", variable.name.replace("_", " ")));
  const group = el("div", "segmented");
  for (const choice of variable.choices) {
    const btn = el("button", choice === value ? "seg active" : "seg", choice);
    btn.type = "button";
    btn.addEventListener("click", () => {
      for (const other of Array.from(group.children)) other.className = "seg";
      btn.className = "seg active";
      onInput(choice);
    });
    group.appendChild(btn);
  }
  wrap.appendChild(group);
  return wrap;
}

function sliderControl(
  name: string,
  min: number,
  max: number,
  value: number,
  unit: string,
  onInput: (v: number) => void,
): HTMLElement {
  const wrap = el("div", "control");
  const label = el("label", "control-label", name.replace("_", " "));
  const readout = el("span", "readout", `${value}${unit ? " " + unit : ""}`);
  label.appendChild(readout);
  const slider = el("input") as HTMLInputElement;
  slider.type = "range";
  slider.min = String(min);
  slider.max = String(max);
  slider.step = "0.05";
  slider.value = String(value);
  slider.addEventListener("input", () => {
    const v = Number(slider.value);
    readout.textContent = `${v}${unit ? " " + unit : ""}`;
    onInput(v);
  });
  wrap.appendChild(label);
  wrap.appendChild(slider);
  return wrap;
}

/** One control per design variable, bounds straight from /design-space. */
export function renderControls(
  root: HTMLElement,
  space: DesignSpaceResponse,
  draft: RoomConfigDraft,
  onChange: (draft: RoomConfigDraft) => void,
): void {
  root.replaceChildren();
  const update = (patch: Partial<RoomConfigDraft>) => {
    Object.assign(draft, patch);
    onChange(draft);
  };
  for (const variable of space.variables) {
    if (variable.kind === "choice") {
      const name = variable.name as "orientation" | "shading" | "divisions";
      root.appendChild(
        choiceControl(variable, draft[name], (v) => update({ [name]: v } as Partial<RoomConfigDraft>)),
      );
    } else if (variable.kind === "pair") {
      const group = el("div", "control-group");
      group.appendChild(el("div", "group-title", "room dimensions"));
      group.appendChild(
        sliderControl("width", variable.width_range[0], variable.width_range[1], draft.width, variable.unit, (v) =>
          update({ width: v }),
        ),
      );
      group.appendChild(
        sliderControl("depth", variable.depth_range[0], variable.depth_range[1], draft.depth, variable.unit, (v) =>
          update({ depth: v }),
        ),
      );
      root.appendChild(group);
    } else {
      const name = variable.name as "reflectance" | "sill_height" | "window_height";
      root.appendChild(
        sliderControl(variable.name, variable.min, variable.max, draft[name], variable.unit, (v) =>
          update({ [name]: v } as Partial<RoomConfigDraft>),
        ),
      );
    }
  }
}

export function renderServiceDown(root: HTMLElement, message: string, onRetry: () => void): void {
  root.replaceChildren();
  const panel = el("div", "service-down");
  panel.appendChild(el("p", undefined, `service unreachable: ${message}`));
  const retry = el("button", "retry", "retry");
  retry.addEventListener("click", onRetry);
  panel.appendChild(retry);
  root.appendChild(panel);
}

/** Metric cards, quality-views badge, and the SHAP bar chart. */
export function renderResults(
  root: HTMLElement,
  state: ExplorerState,
  metricNames: string[],
  selectedMetric: string,
  onSelectMetric: (m: string) => void,
  onPin: () => void,
): void {
  root.replaceChildren();
  if (state.error) {
    root.appendChild(el("div", "toast error", state.error));
  }
  const prediction = state.prediction;
  if (!prediction) {
    root.appendChild(el("p", "placeholder", "adjust the controls to get predictions"));
    return;
  }

  // badge from the exact geometric fractions, never the ANN values
  const exact = prediction.view_exact;
  const lit = qualityViewsBadge(exact.view_factor, exact.view_depth, exact.view_range);
  const badge = el("div", lit ? "badge lit" : "badge", lit ? "quality views: PASS" : "quality views: below 75%");
  root.appendChild(badge);

  const cards = el("div", "cards");
  for (const name of metricNames) {
    const card = el("div", name === selectedMetric ? "card selected" : "card");
    card.appendChild(el("div", "card-name", name));
    card.appendChild(el("div", "card-value", fmt(prediction.prediction[name])));
    if ((VIEW_METRICS as readonly string[]).includes(name)) {
      const exactValue = exact[name as (typeof VIEW_METRICS)[number]];
      card.appendChild(el("div", "card-exact", `exact ${fmt(exactValue)}`));
    }
    card.addEventListener("click", () => onSelectMetric(name));
    cards.appendChild(card);
  }
  root.appendChild(cards);

  if (state.explanation) {
    const chart = el("div", "shap");
    chart.appendChild(el("div", "group-title", `drivers of ${selectedMetric} (click a card to switch)`));
    const bars = sortedBars(state.explanation.phi, selectedMetric);
    const maxAbs = Math.max(1e-9, ...bars.map((b) => Math.abs(b.value)));
    for (const bar of bars) {
      const row = el("div", "bar-row");
      row.appendChild(el("span", "bar-label", bar.group));
      const track = el("div", "bar-track");
      const fill = el("div", bar.value >= 0 ? "bar pos" : "bar neg");
      fill.style.width = `${(Math.abs(bar.value) / maxAbs) * 50}%`;
      if (bar.value >= 0) {
        fill.style.left = "50%";
      } else {
        fill.style.right = "50%";
      }
      track.appendChild(fill);
      row.appendChild(track);
      row.appendChild(el("span", "bar-value", fmt(bar.value)));
      chart.appendChild(row);
    }
    root.appendChild(chart);
  }

  const pin = el("button", "pin", "pin for comparison");
  pin.disabled = state.pinned.length >= 3;
  pin.addEventListener("click", onPin);
  root.appendChild(pin);

  if (state.pinned.length > 0) {
    const tray = el("div", "tray");
    tray.appendChild(el("div", "group-title", "pinned alternatives"));
    state.pinned.forEach((entry, i) => {
      const col = el("div", "tray-col");
      col.appendChild(
        el(
          "div",
          "tray-head",
          `#${i + 1} ${entry.draft.orientation} ${entry.draft.width}x${entry.draft.depth}`,
        ),
      );
      for (const name of metricNames) {
        col.appendChild(el("div", "tray-row", `${name}: ${fmt(entry.prediction.prediction[name])}`));
      }
      tray.appendChild(col);
    });
    root.appendChild(tray);
  }
}
