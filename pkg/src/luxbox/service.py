"""HTTP JSON service exposing prediction and explanation for UI clients.

Endpoints:

* ``GET /health``        - liveness plus the loaded model file digest.
* ``GET /design-space``  - variable names, ranges/choices, defaults, units.
* ``POST /predict``      - room config -> ANN metric predictions, the exact
  geometric view metrics side by side, and the quality-views badge.
* ``POST /explain``      - room config -> per-group Shapley values per metric.

Malformed bodies get 400 with a field-level message; values outside the
advertised ranges get 422 naming the violated bound.  The handler core is
pure (payload dict in, (status, body) out) so it can run without sockets; the
socket layer is a thin ThreadingHTTPServer wrapper over immutable state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from .ann import SurrogateNet, load_model, model_digest
from .daylight import METRIC_NAMES
from .scene import (
    DesignSpace,
    GLAZING_TRANSMITTANCE,
    ROOM_HEIGHT,
    RoomConfig,
    TRAINING_SPACE,
    encode,
    encode_many,
    enumerate_design_space,
)
from .shapley import FeatureGrouping, exact_shap, sample_background
from .views import evaluate_views

_ENUM_FIELDS = {
    "orientation": ("N", "E", "S", "W"),
    "shading": ("none", "louvre15"),
    "divisions": ("one_full_width", "three_equal"),
}
_NUMERIC_FIELDS = ("width", "depth", "reflectance", "sill_height", "window_height")


class RequestError(Exception):
    def __init__(self, status: int, body: dict):
        super().__init__(body.get("error", "request error"))
        self.status = status
        self.body = body


def _variable_descriptors(space: DesignSpace) -> list[dict]:
    """The seven generator variables; room dimensions stay one paired variable."""
    widths = [d[0] for d in space.dimensions]
    depths = [d[1] for d in space.dimensions]

    def rng(name, values, unit):
        lo, hi = min(values), max(values)
        return {
            "name": name,
            "kind": "range",
            "min": lo,
            "max": hi,
            "default": round((lo + hi) / 2.0, 3),
            "unit": unit,
        }

    return [
        {
            "name": "orientation",
            "kind": "choice",
            "choices": [o.value for o in space.orientations],
            "default": space.orientations[0].value,
        },
        {
            "name": "dimensions",
            "kind": "pair",
            "fields": ["width", "depth"],
            "choices": [list(d) for d in space.dimensions],
            "width_range": [min(widths), max(widths)],
            "depth_range": [min(depths), max(depths)],
            "default": list(space.dimensions[0]),
            "unit": "m",
        },
        rng("reflectance", space.reflectances, ""),
        {
            "name": "shading",
            "kind": "choice",
            "choices": [s.value for s in space.shadings],
            "default": space.shadings[0].value,
        },
        rng("sill_height", space.sill_heights, "m"),
        rng("window_height", space.window_heights, "m"),
        {
            "name": "divisions",
            "kind": "choice",
            "choices": [d.value for d in space.divisions],
            "default": space.divisions[0].value,
        },
    ]


class ModelService:
    """Pure request handlers over an immutable loaded model."""

    def __init__(
        self,
        net: SurrogateNet,
        digest: str,
        space: DesignSpace = TRAINING_SPACE,
        background: np.ndarray | None = None,
        grouping: FeatureGrouping | None = None,
    ):
        self.net = net
        self.digest = digest
        self.space = space
        self.grouping = grouping or FeatureGrouping.default()
        if background is None:
            encoded = encode_many(enumerate_design_space(space), net.bounds)
            background = sample_background(encoded, size=100, seed=net.seed)
        self.background = background
        self._descriptors = _variable_descriptors(space)
        self._ranges = {
            d["name"]: (d["min"], d["max"]) for d in self._descriptors if d["kind"] == "range"
        }
        pair = next(d for d in self._descriptors if d["kind"] == "pair")
        self._ranges["width"] = tuple(pair["width_range"])
        self._ranges["depth"] = tuple(pair["depth_range"])
        self._choices = {
            d["name"]: tuple(d["choices"]) for d in self._descriptors if d["kind"] == "choice"
        }

    # -- request handlers ---------------------------------------------------

    def health(self) -> tuple[int, dict]:
        return 200, {"status": "ok", "model_digest": self.digest}

    def design_space(self) -> tuple[int, dict]:
        return 200, {
            "variables": self._descriptors,
            "fixed": {
                "height": ROOM_HEIGHT,
                "glazing_transmittance": GLAZING_TRANSMITTANCE,
            },
            "metrics": list(METRIC_NAMES),
        }

    def parse_config(self, payload) -> RoomConfig:
        if not isinstance(payload, dict):
            raise RequestError(400, {"error": "malformed body", "detail": "expected a JSON object"})
        for name in _ENUM_FIELDS:
            if name not in payload:
                raise RequestError(400, {"error": "malformed body", "detail": f"field '{name}': missing"})
            if payload[name] not in _ENUM_FIELDS[name]:
                raise RequestError(
                    400,
                    {
                        "error": "malformed body",
                        "detail": f"field '{name}': expected one of {list(_ENUM_FIELDS[name])}",
                    },
                )
        values = {}
        for name in _NUMERIC_FIELDS:
            if name not in payload:
                raise RequestError(400, {"error": "malformed body", "detail": f"field '{name}': missing"})
            v = payload[name]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise RequestError(
                    400, {"error": "malformed body", "detail": f"field '{name}': expected a number"}
                )
            values[name] = float(v)

        for name, (lo, hi) in self._ranges.items():
            v = values[name]
            if not lo <= v <= hi:
                raise RequestError(
                    422,
                    {"error": "out of range", "field": name, "bound": [lo, hi], "value": v},
                )
        for name, choices in self._choices.items():
            if payload[name] not in choices:
                raise RequestError(
                    422,
                    {"error": "out of range", "field": name, "bound": list(choices), "value": payload[name]},
                )
        head = values["sill_height"] + values["window_height"]
        if head > ROOM_HEIGHT:
            raise RequestError(
                422,
                {
                    "error": "out of range",
                    "field": "sill_height + window_height",
                    "bound": [0.0, ROOM_HEIGHT],
                    "value": head,
                },
            )
        return RoomConfig.from_dict(payload)

    def predict(self, payload) -> tuple[int, dict]:
        config = self.parse_config(payload)
        pred = self.net.forward(encode(config, self.net.bounds))
        result = evaluate_views(config)
        return 200, {
            "prediction": {m: float(v) for m, v in zip(METRIC_NAMES, pred)},
            "view_exact": {
                "view_range": result.view_range_fraction,
                "view_depth": result.view_depth_fraction,
                "view_factor": result.view_factor_fraction,
            },
            "quality_views_pass": result.quality_views_pass,
        }

    def explain(self, payload) -> tuple[int, dict]:
        config = self.parse_config(payload)
        x = encode(config, self.net.bounds)
        phi, base = exact_shap(self.net.forward, x, self.background, self.grouping)
        pred = self.net.forward(x)
        return 200, {
            "base": {m: float(base[k]) for k, m in enumerate(METRIC_NAMES)},
            "phi": {
                m: {g: float(phi[j, k]) for j, g in enumerate(self.grouping.names)}
                for k, m in enumerate(METRIC_NAMES)
            },
            "prediction": {m: float(pred[k]) for k, m in enumerate(METRIC_NAMES)},
        }

    def handle(self, method: str, path: str, body: bytes | None) -> tuple[int, dict]:
        """Route one request; the socket layer and tests both enter here."""
        try:
            if method == "GET" and path == "/health":
                return self.health()
            if method == "GET" and path == "/design-space":
                return self.design_space()
            if method == "POST" and path in ("/predict", "/explain"):
                try:
                    payload = json.loads(body or b"")
                except json.JSONDecodeError as exc:
                    return 400, {"error": "malformed body", "detail": f"invalid JSON: {exc.msg}"}
                handler = self.predict if path == "/predict" else self.explain
                return handler(payload)
            return 404, {"error": "not found", "detail": path}
        except RequestError as exc:
            return exc.status, exc.body


def make_service(
    model_path: str | Path,
    space: DesignSpace = TRAINING_SPACE,
    background: np.ndarray | None = None,
) -> ModelService:
    net = load_model(model_path)
    return ModelService(net, model_digest(model_path), space, background)


class _Handler(BaseHTTPRequestHandler):
    def _respond(self, status: int, body: dict) -> None:
        data = json.dumps(body).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        status, body = self.server.service.handle("GET", self.path, None)
        self._respond(status, body)

    def do_POST(self) -> None:  # noqa: N802
        length = int(self.headers.get("Content-Length", 0))
        data = self.rfile.read(length) if length else b""
        status, body = self.server.service.handle("POST", self.path, data)
        self._respond(status, body)

    def do_OPTIONS(self) -> None:  # noqa: N802 (CORS preflight for the browser UI)
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def log_message(self, fmt, *args) -> None:  # quiet by default
        pass


class ServiceServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], service: ModelService):
        super().__init__(address, _Handler)
        self.service = service


def serve(
    model_path: str | Path,
    bind: str = "127.0.0.1:8080",
    space: DesignSpace = TRAINING_SPACE,
    background: np.ndarray | None = None,
) -> None:
    """Blocking server loop; requests share the immutable loaded model."""
    host, _, port = bind.partition(":")
    server = ServiceServer((host or "127.0.0.1", int(port or 8080)), make_service(model_path, space, background))
    try:
        server.serve_forever()
    finally:
        server.server_close()
