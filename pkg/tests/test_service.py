import json
import threading
import urllib.request

import numpy as np
import pytest

import luxbox as lb
from luxbox.ann import init_net, model_digest, save_model
from luxbox.scene import encode, encode_many, enumerate_design_space
from luxbox.service import ModelService, ServiceServer, make_service

VALID_BODY = {
    "orientation": "S",
    "width": 6.0,
    "depth": 7.0,
    "reflectance": 0.4,
    "shading": "none",
    "sill_height": 0.9,
    "window_height": 1.8,
    "divisions": "one_full_width",
}


@pytest.fixture(scope="module")
def service(bounds, tmp_path_factory):
    net = init_net(bounds, seed=0)
    path = tmp_path_factory.mktemp("svc") / "model.json"
    save_model(net, path)
    background = encode_many(enumerate_design_space(lb.TRAINING_SPACE)[::48], bounds)
    return ModelService(net, model_digest(path), lb.TRAINING_SPACE, background)


def post(service, path, payload) -> tuple[int, dict]:
    body = payload if isinstance(payload, bytes) else json.dumps(payload).encode()
    return service.handle("POST", path, body)


class TestHealthAndDesignSpace:
    def test_health(self, service):
        status, body = service.handle("GET", "/health", None)
        assert status == 200
        assert body["status"] == "ok"
        assert body["model_digest"].startswith("sha256:")

    def test_design_space_lists_seven_variables(self, service):
        status, body = service.handle("GET", "/design-space", None)
        assert status == 200
        names = [v["name"] for v in body["variables"]]
        assert names == [
            "orientation",
            "dimensions",
            "reflectance",
            "shading",
            "sill_height",
            "window_height",
            "divisions",
        ]
        by_name = {v["name"]: v for v in body["variables"]}
        assert by_name["dimensions"]["width_range"] == [3.0, 8.0]
        assert by_name["dimensions"]["depth_range"] == [4.0, 10.0]
        assert by_name["reflectance"]["min"] == 0.2
        assert by_name["reflectance"]["max"] == 0.7
        assert by_name["sill_height"]["min"] == 0.5
        assert by_name["window_height"]["max"] == 2.4
        assert by_name["orientation"]["choices"] == ["N", "E", "S", "W"]
        assert body["fixed"]["height"] == 3.5

    def test_unknown_path(self, service):
        status, body = service.handle("GET", "/nope", None)
        assert status == 404


class TestPredict:
    def test_valid_prediction(self, service):
        status, body = post(service, "/predict", VALID_BODY)
        assert status == 200
        pred = body["prediction"]
        assert set(pred) == set(lb.METRIC_NAMES)
        assert all(0.0 <= v <= 1.0 for v in pred.values())
        config = lb.RoomConfig.from_dict(VALID_BODY)
        expected = service.net.forward(encode(config, service.net.bounds))
        assert pred["udi"] == pytest.approx(float(expected[0]), rel=1e-12)

    def test_exact_views_alongside(self, service):
        status, body = post(service, "/predict", VALID_BODY)
        res = lb.evaluate_views(lb.RoomConfig.from_dict(VALID_BODY))
        assert body["view_exact"]["view_range"] == res.view_range_fraction
        assert body["view_exact"]["view_depth"] == res.view_depth_fraction
        assert body["view_exact"]["view_factor"] == res.view_factor_fraction
        assert body["quality_views_pass"] == res.quality_views_pass

    def test_invalid_json_400(self, service):
        status, body = post(service, "/predict", b"{not json")
        assert status == 400
        assert body["error"] == "malformed body"

    def test_missing_field_400(self, service):
        payload = dict(VALID_BODY)
        del payload["depth"]
        status, body = post(service, "/predict", payload)
        assert status == 400
        assert "'depth'" in body["detail"]

    def test_wrong_type_400(self, service):
        payload = dict(VALID_BODY, width="six")
        status, body = post(service, "/predict", payload)
        assert status == 400
        assert "'width'" in body["detail"]

    def test_unknown_enum_400(self, service):
        payload = dict(VALID_BODY, orientation="NE")
        status, body = post(service, "/predict", payload)
        assert status == 400

    def test_out_of_range_422_names_bound(self, service):
        payload = dict(VALID_BODY, width=9.5)
        status, body = post(service, "/predict", payload)
        assert status == 422
        assert body["field"] == "width"
        assert body["bound"] == [3.0, 8.0]
        assert body["value"] == 9.5

    def test_head_above_ceiling_422(self, service):
        payload = dict(VALID_BODY, sill_height=1.1, window_height=2.4)
        status, body = post(service, "/predict", payload)
        # 1.1 + 2.4 = 3.5 touches the ceiling and stays legal; push higher via bounds
        assert status == 200
        payload = dict(VALID_BODY, sill_height=1.2, window_height=2.4)
        status, body = post(service, "/predict", payload)
        assert status == 422  # sill above the advertised range

    def test_choice_not_in_space_422(self, bounds, tmp_path):
        net = init_net(bounds, seed=1)
        path = tmp_path / "m.json"
        save_model(net, path)
        svc = ModelService(net, model_digest(path), lb.VALIDATION_SPACE, np.zeros((3, 10)))
        payload = dict(VALID_BODY, orientation="N")  # valid token, not offered by table4
        status, body = post(svc, "/predict", payload)
        assert status == 422
        assert body["field"] == "orientation"


class TestExplain:
    def test_efficiency_of_response(self, service):
        status, body = post(service, "/explain", VALID_BODY)
        assert status == 200
        for metric in lb.METRIC_NAMES:
            total = body["base"][metric] + sum(body["phi"][metric].values())
            assert total == pytest.approx(body["prediction"][metric], abs=1e-6)

    def test_groups_are_the_seven_variables(self, service):
        _, body = post(service, "/explain", VALID_BODY)
        assert set(body["phi"]["udi"]) == {
            "orientation",
            "room_dimensions",
            "reflectance",
            "shading",
            "sill_height",
            "window_height",
            "divisions",
        }

    def test_validation_shared_with_predict(self, service):
        status, _ = post(service, "/explain", dict(VALID_BODY, reflectance=0.05))
        assert status == 422


class TestLiveServer:
    @pytest.fixture()
    def server(self, service):
        srv = ServiceServer(("127.0.0.1", 0), service)
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        yield f"http://127.0.0.1:{srv.server_address[1]}"
        srv.shutdown()
        srv.server_close()

    def test_round_trip_over_http(self, server):
        with urllib.request.urlopen(f"{server}/health") as resp:
            assert resp.status == 200
            assert json.loads(resp.read())["status"] == "ok"
        req = urllib.request.Request(
            f"{server}/predict",
            data=json.dumps(VALID_BODY).encode(),
            headers={"Content-Type": "application/json"},
        )
        with urllib.request.urlopen(req) as resp:
            body = json.loads(resp.read())
        assert set(body["prediction"]) == set(lb.METRIC_NAMES)

    def test_http_error_codes(self, server):
        req = urllib.request.Request(
            f"{server}/predict",
            data=json.dumps(dict(VALID_BODY, width=100.0)).encode(),
            headers={"Content-Type": "application/json"},
        )
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(req)
        assert err.value.code == 422

    def test_concurrent_predictions_match_serial(self, server, service):
        serial = post(service, "/predict", VALID_BODY)[1]
        results = [None] * 8

        def worker(i):
            req = urllib.request.Request(
                f"{server}/predict", data=json.dumps(VALID_BODY).encode()
            )
            with urllib.request.urlopen(req) as resp:
                results[i] = json.loads(resp.read())

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(r == serial for r in results)


class TestMakeService:
    def test_from_model_file(self, trained, tmp_path):
        path = tmp_path / "model.json"
        save_model(trained["net"], path)
        svc = make_service(path)
        status, body = svc.handle("GET", "/health", None)
        assert status == 200
        assert body["model_digest"] == model_digest(path)
        status, body = post(svc, "/predict", VALID_BODY)
        assert status == 200
