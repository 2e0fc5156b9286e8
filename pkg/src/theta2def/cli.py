"""Command-line front end: JSON category specs in, JSON reports out.

Exit codes: 0 success, 1 validation or check failure, 2 internal invariant violation,
3 I/O or malformed JSON.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from typing import Any, Callable, Sequence

from . import cochain, deform, moncat, theta2, totalization
from .cochain import ComplexData, functor_data, identity_data
from .exactfield import Field, LinAlgError, field_from_descriptor, rank
from .moncat import CategoryError, FinMonCat, MonFunctor

EXIT_OK, EXIT_FAIL, EXIT_INTERNAL, EXIT_IO = 0, 1, 2, 3
MAX_DEGREE = 6


class SpecError(ValueError):
    """A spec file that parses as JSON but does not describe valid input."""


class CheckFailed(Exception):
    def __init__(self, report: dict) -> None:
        super().__init__("check failed")
        self.report = report


# ---------------------------------------------------------------------------
# Spec parsing


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _omega(desc: Any, field: Field) -> Callable[[int, int, int], Any] | None:
    if desc is None:
        return None
    if desc == "z2_sign":
        return moncat.z2_sign_cocycle
    if isinstance(desc, list):
        table = {}
        for entry in desc:
            if len(entry) != 4:
                raise SpecError("omega entries are [a, b, c, value]")
            a, b, c, v = entry
            table[(int(a), int(b), int(c))] = field.coerce(v)
        return lambda a, b, c: table.get((a, b, c), field.one)
    raise SpecError(f"unknown omega {desc!r}")


def _group_table(desc: dict) -> list[list[int]]:
    if "cyclic" in desc:
        return moncat.cyclic_group_table(int(desc["cyclic"]))
    if "table" in desc:
        return [[int(v) for v in row] for row in desc["table"]]
    raise SpecError("group needs 'cyclic' or 'table'")


def _algebra(desc: Any) -> tuple[list, list]:
    if desc == "k":
        return moncat.ground_field_algebra()
    if desc == "dual":
        return moncat.dual_number_algebra()
    if isinstance(desc, dict) and "truncated" in desc:
        return moncat.truncated_polynomial_algebra(int(desc["truncated"]))
    if isinstance(desc, dict) and "mult" in desc and "unit" in desc:
        return desc["mult"], desc["unit"]
    raise SpecError(f"unknown algebra {desc!r}")


def _output_vector(K: Field, dim: int, terms: Sequence[Sequence[Any]]) -> tuple:
    out = [K.zero] * dim
    for c, i in terms:
        if not 0 <= int(i) < dim:
            raise SpecError(f"basis index {i} out of range {dim}")
        out[int(i)] = K.add(out[int(i)], K.coerce(c))
    return tuple(out)


def _explicit(spec: dict, K: Field) -> FinMonCat:
    names = list(spec["objects"])
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)

    def obj(name: Any) -> int:
        if name not in idx:
            raise SpecError(f"unknown object {name!r}")
        return idx[name]

    tensor = tuple(tuple(obj(v) for v in row) for row in spec["tensor"])
    hom = tuple(tuple(int(v) for v in row) for row in spec["hom"])
    if len(tensor) != n or len(hom) != n or any(len(r) != n for r in tensor + hom):
        raise SpecError("tensor and hom tables must be n x n")

    compose: dict = {}
    for e in spec.get("compose", []):
        x, y, z = (obj(o) for o in e["objects"])
        a, b = e["inputs"]
        rows = compose.setdefault((x, y, z), [[None] * hom[x][y] for _ in range(hom[y][z])])
        rows[int(b)][int(a)] = _output_vector(K, hom[x][z], e["output"])
    zero = lambda d: (K.zero,) * d
    compose_table = {
        k: tuple(tuple(v if v is not None else zero(hom[k[0]][k[2]]) for v in row) for row in rows)
        for k, rows in compose.items()
    }

    def whiskers(key: str, src_tgt: Callable[[int, int, int], tuple[int, int, int]]) -> dict:
        table: dict = {}
        for e in spec.get(key, []):
            x, y, z = (obj(o) for o in e["objects"])
            nin, s, t = src_tgt(x, y, z)
            imgs = table.setdefault((x, y, z), [zero(hom[s][t]) for _ in range(nin)])
            imgs[int(e["input"])] = _output_vector(K, hom[s][t], e["output"])
        return {k: tuple(v) for k, v in table.items()}

    wl = whiskers("whisker_left", lambda x, y, z: (hom[y][z], tensor[x][y], tensor[x][z]))
    wr = whiskers("whisker_right", lambda x, y, z: (hom[x][y], tensor[x][z], tensor[y][z]))
    assoc = {}
    for e in spec["associator"]:
        x, y, z = (obj(o) for o in e["objects"])
        assoc[(x, y, z)] = tuple(K.coerce(v) for v in e["vector"])
    for x, y, z in itertools.product(range(n), repeat=3):
        if (x, y, z) not in assoc:
            raise SpecError(f"associator missing at {(names[x], names[y], names[z])}")

    def per_object(key: str) -> tuple:
        table = spec[key]
        return tuple(tuple(K.coerce(v) for v in table[name]) for name in names)

    return FinMonCat(
        field=K,
        objects=tuple(names),
        unit=obj(spec["unit"]),
        tensor_obj=tensor,
        hom_dim=hom,
        compose_table=compose_table,
        whisker_left_table=wl,
        whisker_right_table=wr,
        associator=assoc,
        lambda_=per_object("lambda"),
        rho=per_object("rho"),
        identities=per_object("identities"),
    )


def parse_category(spec: Any) -> FinMonCat:
    """Build a category from a spec dict (generator or explicit structure constants)."""
    if not isinstance(spec, dict):
        raise SpecError("a category spec is a JSON object")
    try:
        K = field_from_descriptor(spec.get("field", "Q"))
        gen = spec.get("generator")
        if gen is None:
            return _explicit(spec, K)
        if not isinstance(gen, dict) or len(gen) != 1:
            raise SpecError("generator must have exactly one key")
        (kind, desc), = gen.items()
        if kind == "vec_g_omega":
            return moncat.vec_g_omega(_group_table(desc), _omega(desc.get("omega"), K), K)
        if kind == "deloop":
            mult, unit = _algebra(desc.get("algebra", desc))
            return moncat.deloop_algebra(mult, unit, K)
        if kind == "graded_algebra":
            mult, unit = _algebra(desc["algebra"])
            return moncat.graded_algebra_category(_group_table(desc), mult, unit, _omega(desc.get("omega"), K), K)
        raise SpecError(f"unknown generator {kind!r}")
    except (KeyError, TypeError, IndexError) as exc:
        raise SpecError(f"malformed category spec: {exc!r}") from exc


def parse_functor(spec: Any, C: FinMonCat) -> MonFunctor:
    """``"identity"`` or ``{"identity_on_objects": {"constraint": [[x, y, value], ...]}}``."""
    if spec == "identity" or spec == {"identity": {}}:
        return moncat.identity_functor(C)
    try:
        entries = spec["identity_on_objects"].get("constraint", [])
        K = C.field
        table = {(int(x), int(y)): K.coerce(v) for x, y, v in entries}
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise SpecError(f"malformed functor spec: {exc!r}") from exc
    return moncat.identity_on_objects_functor(C, lambda x, y: table.get((x, y), K.one))


# ---------------------------------------------------------------------------
# Helpers


def _jsonable(K: Field, vec: Sequence[Any]) -> list:
    return [K.to_json(v) for v in vec]


def _validated(C: FinMonCat) -> None:
    rep = moncat.validate(C)
    if not rep.passed:
        raise CheckFailed({"validation": rep.as_dict()})


def _data(args: argparse.Namespace, C: FinMonCat) -> ComplexData:
    if getattr(args, "functor", None):
        F = parse_functor(load_json(args.functor), C)
        fr = moncat.validate_functor(F)
        if not fr.passed:
            raise CheckFailed({"functor_validation": fr.as_dict()})
        return functor_data(F)
    return identity_data(C)


def _check_degree(N: int) -> None:
    if not 0 <= N <= MAX_DEGREE:
        raise SpecError(f"degree bound {N} outside 0..{MAX_DEGREE}")


def predicted_sizes(data: ComplexData, N: int) -> dict[str, int]:
    """Sum of ``A-hat_T`` dimensions per degree, before anything is built."""
    return {
        str(l): sum(cochain.hat_dimension_formula(data, t) for t in theta2.enumerate_trees(l)) for l in range(N + 1)
    }


def _field_name(C: FinMonCat) -> str:
    return C.field.name


# ---------------------------------------------------------------------------
# Commands


def cmd_validate(args: argparse.Namespace, C: FinMonCat) -> tuple[dict, bool]:
    rep = moncat.validate(C)
    return {"validation": rep.as_dict()}, rep.passed


def cmd_cohomology(args: argparse.Namespace, C: FinMonCat) -> tuple[dict, bool]:
    _check_degree(args.max_degree)
    _validated(C)
    data = _data(args, C)
    print(json.dumps({"predicted_hat_dims": predicted_sizes(data, args.max_degree)}, sort_keys=True), file=sys.stderr)
    tot = totalization.build_tot(data, args.max_degree, normalized=args.normalized)
    ranks = [rank(d) for d in tot.differentials]
    out = {
        "normalized": args.normalized,
        "dims": tot.dims(),
        "ranks": ranks,
        "cohomology_dims": totalization.cohomology_dims(tot),
        "d_squared_zero": True,
    }
    return out, True


def _oracle_table(spec: dict) -> list[list[int]] | None:
    gen = spec.get("generator") if isinstance(spec, dict) else None
    if isinstance(gen, dict) and "vec_g_omega" in gen and gen["vec_g_omega"].get("omega") is None:
        return _group_table(gen["vec_g_omega"])
    return None


def cmd_dy(args: argparse.Namespace, C: FinMonCat) -> tuple[dict, bool]:
    _check_degree(args.max_degree + 1)
    _validated(C)
    data = identity_data(C)
    direct = totalization.dy_complex(data, args.max_degree + 1)
    kernel = totalization.dy_row0_kernel(data, args.max_degree + 1)
    equal = all(a.equals(b) for a, b in zip(direct.spaces, kernel.spaces))
    dims = direct.cohomology_dims()
    out: dict = {"dims": direct.dims(), "row0_kernel_equal": equal, "cohomology_dims": dims}
    ok = equal
    table = _oracle_table(args.spec_json)
    if table is not None:
        oracle = deform.group_cohomology_oracle(table, C.field, args.max_degree)
        out["oracle_dims"] = oracle
        out["oracle_agrees"] = oracle == dims
        ok = ok and oracle == dims
    return out, ok


def cmd_selftest(args: argparse.Namespace, C: FinMonCat | None) -> tuple[dict, bool]:
    rels = theta2.relation_instances(args.max_cols, args.max_height)
    rels = [r for r in rels if r.source.dim <= args.max_dim]
    cats = {
        "vec_z2": moncat.vec_g_omega(moncat.cyclic_group_table(2)),
        "vec_z2_sign": moncat.vec_g_omega(moncat.cyclic_group_table(2), moncat.z2_sign_cocycle),
    }
    out: dict = {"relations": len(rels), "categories": {}}
    ok = True
    for name, cat in cats.items():
        sweep = cochain.relation_sweep(identity_data(cat), rels)
        bad = sum(v["theta2_failures"] + v["matrix_failures"] for v in sweep.values())
        ok = ok and bad == 0
        out["categories"][name] = {"families": sweep, "failures": bad}
    # coherence independence: random rewrite paths give the canonical iso
    rng = random.Random(args.seed)
    cat = cats["vec_z2_sign"]
    words = [((0, 1), (1, 1)), (((1, 1), 1), 1), ((1, (1, 0)), (1, 1))]
    agree = all(
        cat.equal(moncat.coherence_iso(cat, w, v, rng), moncat.coherence_iso(cat, w, v))
        for w in words
        for v in words
        if moncat.word_leaves(w) == moncat.word_leaves(v)
    )
    out["coherence_independent"] = agree
    return out, ok and agree


def cmd_reltot(args: argparse.Namespace, C: FinMonCat) -> tuple[dict, bool]:
    _check_degree(args.n + 2)
    _validated(C)
    data = identity_data(C)
    rel = totalization.build_reltot(data, args.n, args.n)
    cos = totalization.cosimplicial_check(rel, args.n, max(args.n - 1, 0))
    tr = totalization.transitivity_check(data, args.n + 2)
    return {"cosimplicial": cos.as_dict(), "transitivity": tr.as_dict()}, cos.passed and tr.passed


def cmd_commutativity(args: argparse.Namespace, C: FinMonCat) -> tuple[dict, bool]:
    _validated(C)
    data = identity_data(C)
    main = totalization.commutativity_check(data, min(args.lk, 1), args.max_m)
    out = {"lk_le_1": main.as_dict()}
    for lk in range(2, args.lk + 1):
        out[f"lk_eq_{lk}"] = totalization.commutativity_check(data, lk, args.max_m, exact_lk=True).as_dict()
    return out, main.passed


def _cocycle_vector(tot: totalization.TotComplex, desc: dict) -> list[Any]:
    K = tot.data.field
    if "vector" in desc:
        vec = [K.coerce(v) for v in desc["vector"]]
        if len(vec) != tot.spaces[3].dim:
            raise SpecError(f"cocycle vector must have length {tot.spaces[3].dim}")
        return vec
    if "blocks" in desc:
        b = desc["blocks"]
        datum = deform.DeformationDatum(
            tot.data, *([K.coerce(v) for v in b[key]] for key in ("kappa", "beta_l", "beta_r", "gamma"))
        )
        return deform.join_3cochain(tot, datum)
    if "random_seed" in desc:
        rng = random.Random(int(desc["random_seed"]))
        return [K.from_int(rng.randint(-3, 3)) for _ in range(tot.spaces[3].dim)]
    raise SpecError("cocycle file needs 'vector', 'blocks' or 'random_seed'")


def cmd_deform(args: argparse.Namespace, C: FinMonCat) -> tuple[dict, bool]:
    _validated(C)
    data = identity_data(C)
    tot = totalization.build_tot(data, 4, normalized=True)
    K = data.field
    vec = _cocycle_vector(tot, load_json(args.cocycle))
    dv = tot.differentials[3].apply(vec)
    is_cocycle = all(K.is_zero(c) for c in dv)
    datum = deform.split_3cochain(tot, vec)
    report = deform.axiom_check_mod_t2(datum)
    matches = {}
    for label, blocks in deform.residue_components(datum).items():
        ok = True
        for T, res in blocks.items():
            b = tot.block(4, T)
            ok = ok and res == b.space.basis.apply(dv[b.offset : b.offset + b.dim])
        matches[label] = ok
    consistent = is_cocycle == report.passed and all(matches.values())
    out = {
        "cocycle": is_cocycle,
        "axioms": report.as_dict(),
        "residue_equals_dv_component": matches,
        "dictionary_consistent": consistent,
    }
    return out, consistent


def cmd_twist(args: argparse.Namespace, C: FinMonCat) -> tuple[dict, bool]:
    _validated(C)
    data = identity_data(C)
    tot = totalization.build_tot(data, 3, normalized=True)
    K = data.field
    desc = load_json(args.twist)
    if "random_seed" in desc:
        tw = deform.random_twist(data, random.Random(int(desc["random_seed"])))
    else:
        try:
            tw = deform.TwistDatum(data, [K.coerce(v) for v in desc["phi1"]], [K.coerce(v) for v in desc["psi1"]])
        except KeyError as exc:
            raise SpecError("twist file needs 'phi1' and 'psi1' or 'random_seed'") from exc
    res = deform.twist_coboundary(tot, tw)
    axioms = deform.axiom_check_mod_t2(res.deformation)
    out = {
        "three_cochain": _jsonable(K, res.three_cochain),
        "matches_twisted_category": res.agrees,
        "differences": [list(map(str, d)) for d in res.differences[:20]],
        "axioms": axioms.as_dict(),
    }
    return out, res.agrees and axioms.passed


COMMANDS: dict[str, Callable[[argparse.Namespace, Any], tuple[dict, bool]]] = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "dy": cmd_dy,
    "selftest": cmd_selftest,
    "reltot": cmd_reltot,
    "commutativity": cmd_commutativity,
    "deform": cmd_deform,
    "twist": cmd_twist,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="theta2def", description="Exact Theta_2 deformation complexes of monoidal categories.")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--timings", action="store_true", help="include wall-clock time (reports stop being byte-stable)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the monoidal category axioms")
    s.add_argument("spec")
    s = sub.add_parser("cohomology", help="Tot dimensions and cohomology")
    s.add_argument("spec")
    s.add_argument("--max-degree", type=int, default=4)
    s.add_argument("--normalized", action="store_true")
    s.add_argument("--functor", help="functor spec file; default is the identity functor")
    s = sub.add_parser("dy", help="Davydov-Yetter row and oracle comparison")
    s.add_argument("spec")
    s.add_argument("--max-degree", type=int, default=3)
    s = sub.add_parser("selftest", help="relation sweep on built-in categories")
    s.add_argument("--relations", action="store_true", help="run the relation sweep (the only selftest)")
    s.add_argument("--max-dim", type=int, default=8)
    s.add_argument("--max-cols", type=int, default=4)
    s.add_argument("--max-height", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s = sub.add_parser("reltot", help="cosimplicial identities and transitivity")
    s.add_argument("spec")
    s.add_argument("--n", type=int, default=3)
    s = sub.add_parser("commutativity", help="1-commutativity sweep")
    s.add_argument("spec")
    s.add_argument("--lk", type=int, default=1)
    s.add_argument("--max-m", type=int, default=3)
    s = sub.add_parser("deform", help="degree-3 cochain as a deformation over dual numbers")
    s.add_argument("spec")
    s.add_argument("--cocycle", required=True)
    s = sub.add_parser("twist", help="coboundary of a twist datum versus the twisted category")
    s.add_argument("spec")
    s.add_argument("--twist", required=True)
    return p


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, exc: BaseException) -> dict:
    return {"error": {"type": kind, "message": str(exc)}}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    echo = {"command": args.command, "argv": list(argv) if argv is not None else sys.argv[1:]}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        C = None
        if hasattr(args, "spec"):
            args.spec_json = load_json(args.spec)
            C = parse_category(args.spec_json)
        body, ok = COMMANDS[args.command](args, C)
        if C is not None:
            body["field"] = _field_name(C)
        report = {**echo, **body, "pass": ok}
        code = EXIT_OK if ok else EXIT_FAIL
    except (OSError, json.JSONDecodeError) as exc:
        report, code = {**echo, **_error("io", exc)}, EXIT_IO
    except CheckFailed as exc:
        report, code = {**echo, **exc.report, "pass": False}, EXIT_FAIL
    except (SpecError, CategoryError, deform.DeformationError) as exc:
        report, code = {**echo, **_error("invalid_input", exc)}, EXIT_FAIL
    except (LinAlgError, AssertionError) as exc:
        report, code = {**echo, **_error("internal_invariant", exc)}, EXIT_INTERNAL
    if args.timings:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    try:
        _emit(report, args.output)
    except OSError as exc:
        _emit({**echo, **_error("io", exc)}, None)
        return EXIT_IO
    return code


if __name__ == "__main__":
    raise SystemExit(main())
