from __future__ import annotations

import json

import pytest

from theta2def.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, SpecError, main, parse_category, parse_functor
from theta2def.moncat import validate

Z2_F2 = {"field": {"Fp": 2}, "generator": {"vec_g_omega": {"cyclic": 2}}}
Z2_SIGN = {"field": "Q", "generator": {"vec_g_omega": {"cyclic": 2, "omega": "z2_sign"}}}
DUAL = {"generator": {"deloop": {"algebra": "dual"}}}

# deloop(k) written out by hand
EXPLICIT_K = {
    "objects": ["e"],
    "unit": "e",
    "tensor": [["e"]],
    "hom": [[1]],
    "compose": [{"objects": ["e", "e", "e"], "inputs": [0, 0], "output": [[1, 0]]}],
    "whisker_left": [{"objects": ["e", "e", "e"], "input": 0, "output": [[1, 0]]}],
    "whisker_right": [{"objects": ["e", "e", "e"], "input": 0, "output": [[1, 0]]}],
    "associator": [{"objects": ["e", "e", "e"], "vector": [1]}],
    "lambda": {"e": [1]},
    "rho": {"e": [1]},
    "identities": {"e": [1]},
}


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_generators():
    assert validate(parse_category(Z2_SIGN)).passed
    assert validate(parse_category(DUAL)).passed
    assert validate(parse_category(EXPLICIT_K)).passed
    spec = {"generator": {"graded_algebra": {"cyclic": 3, "algebra": {"truncated": 2}}}}
    assert parse_category(spec).n_objects == 3


def test_parse_rejects_bad_specs():
    with pytest.raises(SpecError):
        parse_category([1, 2])
    with pytest.raises(SpecError):
        parse_category({"generator": {"nope": {}}})
    with pytest.raises(SpecError):
        parse_category({"generator": {"vec_g_omega": {}}})
    with pytest.raises(SpecError):
        parse_category({**EXPLICIT_K, "associator": []})


def test_parse_functor():
    C = parse_category(Z2_F2)
    assert parse_functor("identity", C).is_identity
    F = parse_functor({"identity_on_objects": {"constraint": [[1, 1, 1]]}}, C)
    assert not F.is_identity
    with pytest.raises(SpecError):
        parse_functor({"other": 1}, C)


def test_validate_ok(tmp_path, capsys):
    code, rep = _run(capsys, "validate", _write(tmp_path, "c.json", Z2_SIGN))
    assert code == EXIT_OK and rep["pass"] and rep["command"] == "validate"


def test_validate_failure(tmp_path, capsys):
    bad = {"generator": {"vec_g_omega": {"cyclic": 3, "omega": [[1, 1, 2, -1]]}}}
    code, rep = _run(capsys, "validate", _write(tmp_path, "c.json", bad))
    assert code == EXIT_FAIL and not rep["pass"]
    assert rep["validation"]["axioms"]["pentagon"]["failures"] > 0


def test_unnormalized_omega_is_invalid_input(tmp_path, capsys):
    bad = {"generator": {"vec_g_omega": {"cyclic": 2, "omega": [[0, 0, 0, -1]]}}}
    code, rep = _run(capsys, "cohomology", _write(tmp_path, "c.json", bad))
    assert code == EXIT_FAIL and rep["error"]["type"] == "invalid_input"


def test_missing_file(tmp_path, capsys):
    code, rep = _run(capsys, "validate", str(tmp_path / "absent.json"))
    assert code == EXIT_IO and rep["error"]["type"] == "io"


def test_malformed_json(tmp_path, capsys):
    code, rep = _run(capsys, "validate", _write(tmp_path, "c.json", "{not json"))
    assert code == EXIT_IO


def test_cohomology(tmp_path, capsys):
    code, rep = _run(capsys, "cohomology", _write(tmp_path, "c.json", Z2_SIGN), "--max-degree", "3")
    assert code == EXIT_OK
    assert rep["cohomology_dims"] == [1, 0, 0]
    assert rep["field"] == "Q"
    err = capsys.readouterr().err
    assert err == ""  # predictions were already consumed with stdout


def test_cohomology_with_functor(tmp_path, capsys):
    spec = _write(tmp_path, "c.json", Z2_F2)
    fn = _write(tmp_path, "f.json", {"identity_on_objects": {"constraint": [[1, 1, 1]]}})
    code, rep = _run(capsys, "cohomology", spec, "--max-degree", "3", "--normalized", "--functor", fn)
    assert code == EXIT_OK and rep["normalized"] is True
    assert rep["cohomology_dims"][2] == 1


def test_degree_bound_rejected(tmp_path, capsys):
    code, rep = _run(capsys, "cohomology", _write(tmp_path, "c.json", DUAL), "--max-degree", "9")
    assert code == EXIT_FAIL


def test_dy_matches_oracle(tmp_path, capsys):
    code, rep = _run(capsys, "dy", _write(tmp_path, "c.json", Z2_F2), "--max-degree", "3")
    assert code == EXIT_OK
    assert rep["cohomology_dims"] == rep["oracle_dims"] == [1, 1, 1, 1]
    assert rep["row0_kernel_equal"]


def test_selftest(capsys):
    code, rep = _run(capsys, "selftest", "--relations", "--max-cols", "2", "--max-height", "2")
    assert code == EXIT_OK
    assert rep["coherence_independent"]
    assert all(c["failures"] == 0 for c in rep["categories"].values())


def test_reltot(tmp_path, capsys):
    code, rep = _run(capsys, "reltot", _write(tmp_path, "c.json", DUAL), "--n", "2")
    assert code == EXIT_OK and rep["cosimplicial"]["passed"] and rep["transitivity"]["passed"]


def test_commutativity(tmp_path, capsys):
    code, rep = _run(capsys, "commutativity", _write(tmp_path, "c.json", Z2_F2), "--lk", "2", "--max-m", "2")
    assert code == EXIT_OK
    assert rep["lk_le_1"]["passed"] and "lk_eq_2" in rep


def test_deform_random_and_blocks(tmp_path, capsys):
    spec = _write(tmp_path, "c.json", DUAL)
    code, rep = _run(capsys, "deform", spec, "--cocycle", _write(tmp_path, "v.json", {"random_seed": 3}))
    assert rep["dictionary_consistent"]
    assert code == (EXIT_OK if rep["dictionary_consistent"] else EXIT_FAIL)
    zero = {"blocks": {"kappa": [0] * 8, "beta_l": [0] * 4, "beta_r": [0] * 4, "gamma": [0] * 2}}
    code, rep = _run(capsys, "deform", spec, "--cocycle", _write(tmp_path, "z.json", zero))
    assert code == EXIT_OK and rep["cocycle"] and rep["axioms"]["pass"]


def test_deform_bad_vector_length(tmp_path, capsys):
    spec = _write(tmp_path, "c.json", DUAL)
    code, rep = _run(capsys, "deform", spec, "--cocycle", _write(tmp_path, "v.json", {"vector": [1]}))
    assert code == EXIT_FAIL


def test_twist(tmp_path, capsys):
    spec = _write(tmp_path, "c.json", Z2_SIGN)
    code, rep = _run(capsys, "twist", spec, "--twist", _write(tmp_path, "t.json", {"random_seed": 4}))
    assert code == EXIT_OK and rep["matches_twisted_category"]


def test_output_file_is_byte_stable(tmp_path, capsys):
    spec = _write(tmp_path, "c.json", Z2_F2)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["--output", str(a), "cohomology", spec, "--max-degree", "3"]) == EXIT_OK
    assert main(["--output", str(b), "cohomology", spec, "--max-degree", "3"]) == EXIT_OK
    capsys.readouterr()
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    # only the echoed argv differs, since it names the output file
    ra.pop("argv"), rb.pop("argv")
    assert ra == rb and "seconds" not in ra
