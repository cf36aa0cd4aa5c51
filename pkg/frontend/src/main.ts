import { ServiceClient, serviceBaseUrl } from "./api.js";
import { DebouncedDispatcher } from "./dispatcher.js";
import { ExplorerState } from "./state.js";
import { defaultDraft, renderControls, renderResults, renderServiceDown } from "./ui.js";
import type { DesignSpaceResponse, RoomConfigDraft } from "./types.js";

const client = new ServiceClient(serviceBaseUrl());
const state = new ExplorerState();

const controlsRoot = document.getElementById("controls")!;
const resultsRoot = document.getElementById("results")!;
const statusRoot = document.getElementById("status")!;

let metricNames: string[] = [];
let selectedMetric = "udi";

function redraw(): void {
  renderResults(resultsRoot, state, metricNames, selectedMetric, (metric) => {
    selectedMetric = metric;
    redraw();
  }, () => {
    state.pinCurrent();
    redraw();
  });
  statusRoot.textContent = state.inFlight ? "computing..." : "";
}

const dispatcher = new DebouncedDispatcher((draft: RoomConfigDraft, seq: number) => {
  state.beginRequest();
  statusRoot.textContent = "computing...";
  client
    .evaluate(draft)
    .then((result) => {
      if (state.applyResult(seq, result)) {
        redraw();
      }
    })
    .catch((err: Error) => {
      if (state.applyError(seq, err.message)) {
        redraw();
      }
    });
});

function boot(): void {
  client
    .designSpace()
    .then((space: DesignSpaceResponse) => {
      metricNames = space.metrics;
      state.draft = defaultDraft(space);
      renderControls(controlsRoot, space, state.draft, (draft) => dispatcher.change(draft));
      dispatcher.flush(state.draft);
    })
    .catch((err: Error) => {
      renderServiceDown(controlsRoot, err.message, boot);
    });
}

boot();
