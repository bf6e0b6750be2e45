# pylint: disable=missing-function-docstring,missing-module-docstring
import json
from pathlib import Path
from typing import Any
from typing import List
from typing import Tuple

import pytest

from boxconvex import Polynomial
from boxconvex.cli import LOCK_FILE_NAME
from boxconvex.cli import ExitCode
from boxconvex.cli import dump_json
from boxconvex.cli import main
from boxconvex.helpers import THREADS_ENV_VAR
from boxconvex.polynomial import Box

from .graphs import SINGLE_EDGE


def _write(tmp_path: Path, name: str, obj: Any) -> str:
    target = tmp_path / name
    target.write_text(json.dumps(obj), encoding="utf-8")
    return str(target)


def _run(capsys: pytest.CaptureFixture, argv: List[str]) -> Tuple[int, Any]:
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_dump_json_is_canonical() -> None:
    assert dump_json({"b": 1, "a": ["1/2"]}) == '{"a": ["1/2"], "b": 1}\n'


def test_gadget_to_cubic(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    graph = _write(tmp_path, "graph.json", SINGLE_EDGE.to_json())
    out = tmp_path / "out"
    code, res = _run(
        capsys,
        ["gadget", "to-cubic", "--graph", graph, "--k", "1", "--out", str(out)],
    )
    assert code == ExitCode.YES
    assert res["manifest"] == {
        "n": 2,
        "k": 1,
        "mu": "13",
        "alpha": "65568",
        "eta": "1/8196",
    }
    assert sorted(Path(p).name for p in res["files"]) == [
        "box.json",
        "f.json",
        "manifest.json",
    ]
    poly = Polynomial.from_json(json.loads((out / "f.json").read_text()))
    assert poly.nvars == 5
    assert Box.from_json(json.loads((out / "box.json").read_text())) == Box.cube(5)
    assert LOCK_FILE_NAME not in {Path(p).name for p in res["files"]}


@pytest.mark.parametrize(
    "target,name", [("to-interval", "interval.json"), ("to-pencil", "pencil.json")]
)
def test_gadget_other_targets(
    tmp_path: Path, capsys: pytest.CaptureFixture, target: str, name: str
) -> None:
    graph = _write(tmp_path, "graph.json", SINGLE_EDGE.to_json())
    code, _ = _run(
        capsys,
        ["gadget", target, "--graph", graph, "--k", "2", "--out", str(tmp_path)],
    )
    assert code == ExitCode.YES
    assert (tmp_path / name).exists()
    assert json.loads((tmp_path / "manifest.json").read_text())["mu"] == "14"


def test_check_convex(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    poly = _write(tmp_path, "f.json", Polynomial.monomial([3]).to_json())
    box = _write(tmp_path, "box.json", Box.cube(1).to_json())
    code, res = _run(capsys, ["check", "convex", "--poly", poly, "--box", box])
    assert code == ExitCode.NO
    assert res == {
        "status": "not_convex",
        "mode": "exact-vertex-enumeration",
        "witness_point": ["-1"],
        "witness_direction": ["1"],
        "witness_value": "-6",
    }

    box = _write(tmp_path, "box.json", {"lower": ["0"], "upper": ["1"]})
    code, res = _run(capsys, ["check", "convex", "--poly", poly, "--box", box])
    assert code == ExitCode.YES
    assert res["status"] == "convex"


def test_check_convex_unknown(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    x0, x1 = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    poly = _write(tmp_path, "f.json", ((x0 + x1) ** 4).to_json())
    box = _write(tmp_path, "box.json", Box.cube(2).to_json())
    code, res = _run(
        capsys,
        ["check", "convex", "--poly", poly, "--box", box, "--budget", "32"],
    )
    assert code == ExitCode.UNKNOWN
    assert res["mode"] == "inconclusive"


def test_check_convex_fast_mode(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    poly = _write(tmp_path, "f.json", (-Polynomial.monomial([2])).to_json())
    box = _write(tmp_path, "box.json", Box.cube(1).to_json())
    code, res = _run(
        capsys,
        ["check", "convex", "--poly", poly, "--box", box, "--mode", "fast"],
    )
    assert code == ExitCode.NO
    assert res["mode"] == "negative-curvature-search"


def test_check_interval_psd(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    matrix = _write(
        tmp_path,
        "m.json",
        {"n": 2, "lower": [["1", "-2"], ["-2", "1"]], "upper": [["1", "2"], ["2", "1"]]},
    )
    code, res = _run(capsys, ["check", "interval-psd", "--matrix", matrix])
    assert code == ExitCode.NO
    assert res["checked_vertices"] == 1
    assert res["witness_vector"] == ["2", "1"]

    matrix = _write(
        tmp_path, "m.json", {"lower": [["1", "0"], ["0", "1"]], "upper": [["1", "0"], ["0", "1"]]}
    )
    code, res = _run(capsys, ["check", "interval-psd", "--matrix", matrix])
    assert code == ExitCode.YES
    assert res["all_psd"] is True


def test_oracles(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    graph = _write(tmp_path, "graph.json", SINGLE_EDGE.to_json())
    code, res = _run(capsys, ["oracle", "maxcut", "--graph", graph])
    assert code == ExitCode.YES
    assert res == {"size": 1, "indicator": [1, -1]}

    code, res = _run(
        capsys, ["oracle", "verify-reduction", "--graph", graph, "--k", "1"]
    )
    assert code == ExitCode.YES
    assert res["iff_holds"] is True
    assert res["interval_psd"] is False

    code, res = _run(capsys, ["oracle", "gap-check", "--graph", graph, "--k", "2"])
    assert code == ExitCode.YES
    assert res["in_forbidden_band"] is False

    point = _write(tmp_path, "x.json", ["1", "-1"])
    code, res = _run(
        capsys, ["oracle", "lemma-check", "--graph", graph, "--point", point]
    )
    assert code == ExitCode.YES
    assert res["value"] == "729/52"


def test_parse_errors(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert main(["oracle", "maxcut", "--graph", str(broken)]) == ExitCode.PARSE_ERROR
    assert (
        main(["oracle", "maxcut", "--graph", str(tmp_path / "missing.json")])
        == ExitCode.PARSE_ERROR
    )

    graph = _write(tmp_path, "graph.json", {"n": 2, "edges": [[0, 1], [1, 0]]})
    assert main(["oracle", "maxcut", "--graph", graph]) == ExitCode.PARSE_ERROR

    graph = _write(tmp_path, "graph.json", SINGLE_EDGE.to_json())
    assert main(["oracle", "gap-check", "--graph", graph]) == ExitCode.PARSE_ERROR
    assert main(["check", "convex", "--poly", graph]) == ExitCode.PARSE_ERROR
    assert main(["check", "interval-psd"]) == ExitCode.PARSE_ERROR
    assert capsys.readouterr().out == ""


def test_argparse_errors_exit_with_parse_error() -> None:
    with pytest.raises(SystemExit) as ctx:
        main(["frobnicate"])

    assert ctx.value.code == ExitCode.PARSE_ERROR


def test_domain_errors(tmp_path: Path) -> None:
    graph = _write(tmp_path, "graph.json", SINGLE_EDGE.to_json())
    assert (
        main(["gadget", "to-cubic", "--graph", graph, "--k", "0", "--out", str(tmp_path)])
        == ExitCode.DOMAIN_ERROR
    )

    assert (
        main(["gadget", "to-cubic", "--graph", graph, "--k", "9", "--out", str(tmp_path)])
        == ExitCode.DOMAIN_ERROR
    )


def test_box_of_wrong_dimension(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    poly = _write(tmp_path, "f.json", Polynomial.monomial([1, 1]).to_json())
    box = _write(tmp_path, "box.json", Box.cube(3).to_json())
    assert (
        main(["check", "convex", "--poly", poly, "--box", box])
        == ExitCode.PARSE_ERROR
    )
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize("value", ["lots", "0"])
def test_invalid_thread_count_is_a_parse_error(
    tmp_path: Path,
    capsys: pytest.CaptureFixture,
    monkeypatch: pytest.MonkeyPatch,
    value: str,
) -> None:
    monkeypatch.setenv(THREADS_ENV_VAR, value)
    poly = _write(tmp_path, "f.json", Polynomial.monomial([3]).to_json())
    box = _write(tmp_path, "box.json", Box.cube(1).to_json())
    assert (
        main(["check", "convex", "--poly", poly, "--box", box])
        == ExitCode.PARSE_ERROR
    )
    assert capsys.readouterr().out == ""


def test_size_guard(tmp_path: Path) -> None:
    graph = _write(tmp_path, "graph.json", {"n": 25, "edges": []})
    assert main(["oracle", "maxcut", "--graph", graph]) == ExitCode.TOO_LARGE
