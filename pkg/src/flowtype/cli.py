"""Command-line interface: one JSON document per invocation on stdout.

Object arguments (groups, seminorms, flows, sets, structures) accept inline
JSON or a path to a JSON file.  Element lists accept a JSON array or a
comma-separated string such as ``"-1,0,1"``.

Exit codes: 0 success, 2 malformed input, 3 failed precondition or guard.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import re
import sys

from .errors import InvalidInput, PreconditionError
from .flowspace import (
    FiniteFlow,
    ZSubshift,
    cyclic_flows,
    flow_from_json,
    is_transitive,
    parse_subset,
    partial_sigma,
    r_u_disjoint,
    subset_to_json,
    translate,
    uncovered_point,
    witness_point,
)
from .group import Group, SymmetricFiniteSet, ball
from .oracle import brute_type, factor_exists, verify_containment_theorem
from .seminorm import (
    FiniteMetricSpace,
    Seminorm,
    bk_verify,
    chain_from_json,
    fmt,
    fubini_witness,
    lipschitz_correct,
    phi,
    rational,
    seminorm_ball,
)
from .weaktype import (
    LStructure,
    WeakType,
    check_containment,
    enumerate_type,
    full_structure,
    realizes,
    type_meet,
)

log = logging.getLogger("flowtype")


# -- argument decoding -----------------------------------------------------


def load_json(text: str):
    """Inline JSON, or the contents of a JSON file."""
    stripped = text.strip()
    if stripped[:1] in "{[\"" or stripped in ("true", "false", "null") or re.fullmatch(r"-?\d+", stripped):
        source = text
    elif os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            source = fh.read()
    else:
        raise InvalidInput(f"{text!r} is neither JSON nor a readable file")
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"bad JSON in {text[:40]!r}: {exc}") from exc


def parse_elements(G: Group, text: str) -> list:
    stripped = text.strip()
    if stripped.startswith("["):
        items = load_json(stripped)
        if not isinstance(items, list):
            raise InvalidInput("element list must be a JSON array")
        return [G.parse(x) for x in items]
    if G.kind == "lattice" and G.d > 1:
        raise InvalidInput("elements of Z^d with d > 1 must be given as a JSON array")
    if not stripped:
        return []
    return [G.parse(x.strip()) for x in stripped.split(",")]


def parse_symmetric(G: Group, text: str | None) -> SymmetricFiniteSet:
    if text is None:
        if not G.is_finite:
            raise InvalidInput("--F is required for infinite groups")
        return SymmetricFiniteSet.of(G, G.elements())
    return SymmetricFiniteSet.of(G, parse_elements(G, text))


def load_group(text: str) -> Group:
    return Group.from_json(load_json(text))


def load_flow(text: str):
    return flow_from_json(load_json(text))


def load_family(X, text: str) -> list:
    items = load_json(text)
    if not isinstance(items, list):
        raise InvalidInput("family must be a JSON array")
    return [parse_subset(X, A) for A in items]


def load_domain(G: Group, text: str) -> list:
    obj = load_json(text) if text.strip().startswith("{") else None
    if isinstance(obj, dict):
        if "ball" not in obj:
            raise InvalidInput('domain object must be {"ball": r}')
        return sorted(ball(G, G.standard_generators(), int(obj["ball"])), key=G.sort_key)
    return parse_elements(G, text)


def fmt_elements(G: Group, elems) -> list[str]:
    return [G.format(g) for g in sorted(elems, key=G.sort_key)]


def fmt_witness(x):
    if x is None:
        return None
    return x.to_json() if hasattr(x, "to_json") else x


# -- commands --------------------------------------------------------------


def cmd_mul(a):
    G = load_group(a.group)
    return {"result": G.format(G.mul(G.parse(a.a), G.parse(a.b)))}


def cmd_ball(a):
    G = load_group(a.group)
    gens = G.standard_generators() if a.gens is None else SymmetricFiniteSet.closure(G, parse_elements(G, a.gens))
    B = ball(G, gens, a.radius)
    return {"size": len(B), "elements": fmt_elements(G, B)}


def cmd_seminorm_eval(a):
    G = load_group(a.group)
    sigma = Seminorm.from_json(G, load_json(a.seminorm))
    return {"value": fmt(sigma(G.parse(a.g)))}


def cmd_phi(a):
    G = load_group(a.group)
    sigma = Seminorm.from_json(G, load_json(a.sigma))
    sigma_prime = Seminorm.from_json(G, load_json(a.sigma_prime))
    F = parse_symmetric(G, a.F)
    support = None if a.support is None else load_domain(G, a.support)
    return {"value": fmt(phi(sigma, sigma_prime, F, rational(a.eps), G.parse(a.g), support))}


def cmd_bk_check(a):
    G = load_group(a.group)
    chain = chain_from_json(G, load_json(a.chain))
    report = bk_verify(chain)
    if report.precondition != "ok":
        raise PreconditionError(report.precondition)
    return report.to_json(G)


def cmd_fubini_witness(a):
    G = load_group(a.group)
    s0 = Seminorm.from_json(G, load_json(a.sigma0))
    s2 = Seminorm.from_json(G, load_json(a.sigma2))
    wit = fubini_witness(G, s0, s2, rational(a.delta))
    return {"F": fmt_elements(G, wit.F.elements), "eps": fmt(wit.eps), "verified": wit.verified}


def cmd_lipschitz_correct(a):
    space = FiniteMetricSpace(tuple(tuple(row) for row in load_json(a.rho)))
    f = load_json(a.f)
    if not isinstance(f, list):
        raise InvalidInput("--f must be a JSON array")
    return {"f": [fmt(v) for v in lipschitz_correct(space, f, rational(a.delta))]}


def cmd_seminorm_ball(a):
    G = load_group(a.group)
    sigma = Seminorm.from_json(G, load_json(a.seminorm))
    B = seminorm_ball(sigma, rational(a.c), load_domain(G, a.domain))
    return {"elements": fmt_elements(G, B)}


def _subshift(text: str) -> ZSubshift:
    X = load_flow(text)
    if not isinstance(X, ZSubshift):
        raise InvalidInput("this command needs a subshift")
    return X


def cmd_sft_empty(a):
    X = _subshift(a.flow)
    C = parse_subset(X, load_json(a.set))
    x = witness_point(X, C)
    return {"empty": x is None, "witness": fmt_witness(x)}


def cmd_sft_cover(a):
    X = load_flow(a.flow)
    x = uncovered_point(X, load_family(X, a.family))
    return {"cover": x is None, "witness": fmt_witness(x)}


def cmd_translate(a):
    if a.flow is None:
        # a bare clopen set: the alphabet only needs to cover its symbols
        obj = load_json(a.set)
        C = parse_subset(ZSubshift(max(2, _alphabet_of(obj))), obj)
        return translate(C, Group.lattice(1).parse(a.n)).to_json()
    X = load_flow(a.flow)
    C = parse_subset(X, load_json(a.set))
    n = X.group.parse(a.n)
    return subset_to_json(X, translate(C, n, X if isinstance(X, FiniteFlow) else None))


def _alphabet_of(obj) -> int:
    words = obj.get("allowed", []) if isinstance(obj, dict) else []
    digits = [int(ch) for w in words for ch in str(w) if ch.isdigit()]
    return max(digits, default=0) + 1


def cmd_r_u_disjoint(a):
    X = load_flow(a.flow)
    A = parse_subset(X, load_json(a.A))
    B = parse_subset(X, load_json(a.B))
    U = parse_symmetric(X.group, a.U)
    return {"disjoint": r_u_disjoint(X, A, B, U.sorted())}


def cmd_transitive(a):
    return {"transitive": is_transitive(load_flow(a.flow))}


def cmd_partial_sigma(a):
    X = load_flow(a.flow)
    if not isinstance(X, FiniteFlow):
        raise InvalidInput("partial-sigma needs a finite flow")
    sigma = Seminorm.from_json(X.group, load_json(a.seminorm))
    return {"value": fmt(partial_sigma(X, sigma, a.x, a.y))}


def cmd_full_structure(a):
    X = load_flow(a.flow)
    F = parse_symmetric(X.group, a.F)
    return full_structure(X, load_family(X, a.family), F).to_json()


def cmd_realizes(a):
    X = load_flow(a.flow)
    M = LStructure.from_json(X.group, load_json(a.structure))
    fam = realizes(X, M, a.w)
    return {
        "realized": fam is not None,
        "resolution": {"w": a.w},
        "witness": None if fam is None else [subset_to_json(X, A) for A in fam],
    }


def cmd_type(a):
    X = load_flow(a.flow)
    F = parse_symmetric(X.group, a.F)
    return enumerate_type(X, F, a.n, a.w, force=a.force).to_json()


def cmd_contain(a):
    X, Y = load_flow(a.X), load_flow(a.Y)
    F = parse_symmetric(X.group, a.F)
    return check_containment(X, Y, F, a.n, a.wX, a.wY, force=a.force).to_json()


def cmd_type_meet(a):
    types = [WeakType.from_json(load_json(t)) for t in a.types]
    return type_meet(types).to_json()


def _finite(text: str) -> FiniteFlow:
    X = load_flow(text)
    if not isinstance(X, FiniteFlow):
        raise InvalidInput("this command needs a finite flow")
    return X


def cmd_brute_type(a):
    X = _finite(a.flow)
    F = parse_symmetric(X.group, a.F)
    return brute_type(X, F, a.nmax, force=a.force).to_json()


def cmd_factor(a):
    f = factor_exists(_finite(a.source), _finite(a.target), force=a.force)
    return {"factor": None if f is None else list(f.assignment)}


def cmd_verify_theorem(a):
    if a.cyclic is not None:
        flows = cyclic_flows(a.cyclic, a.max_points)
    elif a.flows is not None:
        items = load_json(a.flows)
        if not isinstance(items, list):
            raise InvalidInput("--flows must be a JSON array of finite flows")
        flows = [FiniteFlow.from_json(x) for x in items]
    else:
        raise InvalidInput("give --cyclic N or --flows")
    if not flows:
        raise InvalidInput("no flows to compare")
    G = flows[0].group
    if any(X.group != G for X in flows):
        raise InvalidInput("all flows must share one group")
    F = parse_symmetric(G, a.F)
    return verify_containment_theorem(list(itertools.product(flows, repeat=2)), F, force=a.force)


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flowtype", description="Seminorms, subshifts and weak types of group flows.")
    p.add_argument("--seed", type=int, help="reserved; every computation is deterministic")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--force", action="store_true", help="override search-size guards")
        return sp

    sp = command("mul", cmd_mul, "multiply two group elements")
    sp.add_argument("--group", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = command("ball", cmd_ball, "word-metric ball")
    sp.add_argument("--group", required=True)
    sp.add_argument("--gens", help="generators (default: standard)")
    sp.add_argument("--radius", type=int, required=True)

    sp = command("seminorm-eval", cmd_seminorm_eval, "evaluate a seminorm")
    sp.add_argument("--group", required=True)
    sp.add_argument("--seminorm", required=True)
    sp.add_argument("--g", required=True)

    sp = command("phi", cmd_phi, "evaluate Phi(sigma, sigma', F, eps) at g")
    sp.add_argument("--group", required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--sigma-prime", required=True)
    sp.add_argument("--F", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--support", help="finite support (required for infinite groups)")

    sp = command("bk-check", cmd_bk_check, "check the dyadic bounds of a chain seminorm")
    sp.add_argument("--group", required=True)
    sp.add_argument("--chain", required=True)

    sp = command("fubini-witness", cmd_fubini_witness, "find F and eps for the Phi bound")
    sp.add_argument("--group", required=True)
    sp.add_argument("--sigma0", required=True)
    sp.add_argument("--sigma2", required=True)
    sp.add_argument("--delta", required=True)

    sp = command("lipschitz-correct", cmd_lipschitz_correct, "nearby Lipschitz function")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--delta", required=True)

    sp = command("seminorm-ball", cmd_seminorm_ball, "strict ball of a seminorm within a domain")
    sp.add_argument("--group", required=True)
    sp.add_argument("--seminorm", required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--domain", required=True, help='element list or {"ball": r}')

    sp = command("sft-empty", cmd_sft_empty, "is a clopen set empty in a subshift")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--set", required=True)

    sp = command("sft-cover", cmd_sft_cover, "does a family cover the flow")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--family", required=True)

    sp = command("translate", cmd_translate, "translate a set by a group element")
    sp.add_argument("--flow")
    sp.add_argument("--set", required=True)
    sp.add_argument("--n", required=True)

    sp = command("r-u-disjoint", cmd_r_u_disjoint, "is A x B disjoint from the R_U relation")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--U", required=True)

    sp = command("transitive", cmd_transitive, "topological transitivity")
    sp.add_argument("--flow", required=True)

    sp = command("partial-sigma", cmd_partial_sigma, "orbit pseudo-distance from a seminorm")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--seminorm", required=True)
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--y", type=int, required=True)

    sp = command("full-structure", cmd_full_structure, "full structure of a family")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--F")

    sp = command("realizes", cmd_realizes, "search for a realization of a structure")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--structure", required=True)
    sp.add_argument("--w", type=int, default=0)

    sp = command("type", cmd_type, "weak type at a resolution")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--F")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--w", type=int, default=0)

    sp = command("contain", cmd_contain, "weak-type containment verdict")
    sp.add_argument("--X", required=True)
    sp.add_argument("--Y", required=True)
    sp.add_argument("--F")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--wX", type=int, default=0)
    sp.add_argument("--wY", type=int, default=0)

    sp = command("type-meet", cmd_type_meet, "structures common to several types")
    sp.add_argument("--types", nargs="+", required=True)

    sp = command("brute-type", cmd_brute_type, "exact type of a finite flow")
    sp.add_argument("--flow", required=True)
    sp.add_argument("--F")
    sp.add_argument("--nmax", type=int, required=True)

    sp = command("factor", cmd_factor, "search for a factor map")
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)

    sp = command("verify-theorem", cmd_verify_theorem, "compare factors with type containment")
    sp.add_argument("--cyclic", type=int, help="use all Z/N flows on few points")
    sp.add_argument("--max-points", type=int, default=3)
    sp.add_argument("--flows", help="JSON array of finite flows")
    sp.add_argument("--F")

    return p


_NEGATIVE_VALUE = re.compile(r"^-\d")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--F -1,0,1`` into ``--F=-1,0,1`` so argparse keeps the value."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_join_negative_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        result = args.func(args)
    except InvalidInput as exc:
        print(f"flowtype: error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"flowtype: precondition failed: {exc}", file=sys.stderr)
        return 3
    except RecursionError:
        print("flowtype: error: input too deeply nested", file=sys.stderr)
        return 2
    sys.stdout.write(json.dumps(result, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
