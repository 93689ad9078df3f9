"""Command line front end: JSON system definitions in, JSON/DOT reports out.

Exit codes: 0 for a clean run or passing check, 1 for usage and parse
problems, 2 for a violated property, 3 for a blown resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .action import (
    ZPartialAction,
    axioms_check,
    generated_family,
    germ_index,
    transport_index,
)
from .cantor import ClopenSet, Point, check_word
from .cells import adapted_depth
from .envelope import (
    GermPair,
    etale_probe,
    hausdorff_decide,
    nonseparable_pair,
    quotient_decomposition,
)
from .errors import (
    BaseNotInDomain,
    CapExceeded,
    DepthTooSmall,
    EngineError,
    LevelRequired,
    NotInDomain,
    NotStabilized,
    NoWitness,
    ParseError,
)
from .filtration import (
    Exhaustion,
    bratteli_build,
    default_schedule,
    export,
    inclusion_witness,
    truncated_relation,
)
from .prefix_map import GeneratedMap, PrefixMap
from .verify import equivariance_sign, isomorphism_suite

_TOP_KEYS = {"name", "generator", "exhaustion", "defaults"}
_DEFAULT_KEYS = {"bound", "depth", "level", "levels", "cap", "seed"}


@dataclass(frozen=True)
class SystemDefinition:
    name: str
    generator: PrefixMap | GeneratedMap
    counts: tuple[int, ...] | None = None
    defaults: dict = field(default_factory=dict)

    @property
    def is_generated(self) -> bool:
        return isinstance(self.generator, GeneratedMap)

    def default(self, key: str, fallback=None):
        return self.defaults.get(key, fallback)


def load_system(path: str) -> SystemDefinition:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise ParseError("system definition must be a JSON object")
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown system fields: {sorted(unknown)}")
    for key in ("name", "generator"):
        if key not in obj:
            raise ParseError(f"system definition needs a {key!r} field")
    name = obj["name"]
    if not isinstance(name, str):
        raise ParseError("system name must be text")

    gen = obj["generator"]
    if not isinstance(gen, dict) or "kind" not in gen:
        raise ParseError("generator must be an object with a 'kind'")
    kind = gen["kind"]
    if kind == "odometer":
        if set(gen) != {"kind"}:
            raise ParseError("odometer generator takes no other fields")
        generator: PrefixMap | GeneratedMap = GeneratedMap("odometer")
    elif kind == "rules":
        if set(gen) != {"kind", "rules", "exhausts"}:
            raise ParseError(
                "rules generator needs exactly 'kind', 'rules' and 'exhausts'"
            )
        raw = gen["rules"]
        if not isinstance(raw, list) or any(
            not isinstance(pair, list) or len(pair) != 2 for pair in raw
        ):
            raise ParseError("rules must be a list of [source, target] pairs")
        rules = tuple((check_word(u), check_word(v)) for u, v in raw)
        if gen["exhausts"] == "clopen":
            generator = PrefixMap(rules)
        elif gen["exhausts"] == "open":
            generator = GeneratedMap("rules", rules)
        else:
            raise ParseError("'exhausts' must be 'open' or 'clopen'")
    else:
        raise ParseError(f"unknown generator kind {kind!r}")

    counts = None
    if "exhaustion" in obj:
        if not isinstance(generator, GeneratedMap):
            raise ParseError("an exhaustion schedule needs an open enumeration")
        sched = obj["exhaustion"]
        if (
            not isinstance(sched, list)
            or not sched
            or any(not isinstance(c, int) or c < 1 for c in sched)
            or sched != sorted(sched)
        ):
            raise ParseError(
                "exhaustion must be a nondecreasing list of rule counts >= 1"
            )
        counts = tuple(sched)

    defaults = obj.get("defaults", {})
    if not isinstance(defaults, dict) or set(defaults) - _DEFAULT_KEYS:
        raise ParseError(f"defaults may only set {sorted(_DEFAULT_KEYS)}")
    for key, val in defaults.items():
        if not isinstance(val, int):
            raise ParseError(f"default {key!r} must be an integer")
    return SystemDefinition(name, generator, counts, dict(defaults))


def _resolve(args, sd: SystemDefinition, name: str, fallback=None):
    val = getattr(args, name, None)
    return val if val is not None else sd.default(name, fallback)


def _action(sd: SystemDefinition) -> ZPartialAction:
    return ZPartialAction(sd.generator, sd.counts)


def _germ(text: str) -> GermPair:
    try:
        slot, point = text.split(":", 1)
        return GermPair(int(slot), Point.parse(point))
    except ValueError as exc:
        raise ParseError(f"germ {text!r} must look like 'index:point'") from exc


def _violations(sd: SystemDefinition):
    return list(sd.generator.violations())


# --------------------------------------------------------------------------
# Commands: each returns (exit code, payload); dict payloads print as JSON.


def cmd_validate(args):
    sd = load_system(args.system)
    bad = _violations(sd)
    if bad:
        return 2, {"ok": False, "name": sd.name, "violations": bad}
    bound = _resolve(args, sd, "bound", 4)
    level = _resolve(args, sd, "level", bound if sd.is_generated else None)
    report = axioms_check(generated_family(_action(sd), bound, level), bound)
    return (0 if report.ok else 2), {
        "ok": report.ok,
        "name": sd.name,
        "violations": [],
        "axioms": report.to_json(),
    }


def cmd_axioms(args):
    sd = load_system(args.system)
    bad = _violations(sd)
    if bad:
        return 2, {"ok": False, "violations": bad}
    bound = _resolve(args, sd, "bound", 4)
    level = _resolve(args, sd, "level", bound if sd.is_generated else None)
    report = axioms_check(generated_family(_action(sd), bound, level), bound)
    return (0 if report.ok else 2), report.to_json()


def cmd_hausdorff(args):
    sd = load_system(args.system)
    bad = _violations(sd)
    if bad:
        return 2, {"ok": False, "violations": bad}
    bound = _resolve(args, sd, "bound", 4)
    depth = _resolve(args, sd, "depth", 10)
    cert = hausdorff_decide(_action(sd), bound, depth)
    payload = cert.to_json()
    if cert.verdict == "non-clopen-witness":
        try:
            payload["pair"] = nonseparable_pair(
                _action(sd), cert.t, depth
            ).to_json()
        except NoWitness as exc:
            payload["pair"] = None
            payload["pair_error"] = str(exc)
    return 0, payload


def cmd_related(args):
    sd = load_system(args.system)
    p, q = _germ(args.p), _germ(args.q)
    a = _action(sd)
    level = _resolve(args, sd, "level")
    dom = a.domain(germ_index(p.index, q.index), level)
    member = dom.contains_point(p.point)
    image = None
    if member:
        image = a.apply(transport_index(p.index, q.index), p.point, level)
    return 0, {
        "related": bool(member and image == q.point),
        "p": str(p),
        "q": str(q),
        "germ_set": str(dom),
        "member": member,
        "image": None if image is None else str(image),
    }


def cmd_etale(args):
    sd = load_system(args.system)
    a = _action(sd)
    level = _resolve(args, sd, "level")
    t, s = args.t, args.s
    if args.base is not None:
        base = ClopenSet.parse(args.base)
    else:
        base = a.domain(germ_index(t, s), level)
    report = etale_probe(a, t, s, base, level)
    return (0 if report.ok else 2), report.to_json()


def cmd_quotient(args):
    sd = load_system(args.system)
    a = _action(sd)
    if sd.is_generated:
        level = _resolve(args, sd, "level")
        if level is None:
            raise LevelRequired("--level is needed for an open enumeration")
        a = a.at_level(level)
    bound = _resolve(args, sd, "bound", 2)
    depth = _resolve(args, sd, "depth")
    if depth is None:
        depth = adapted_depth(a, bound)
    part = quotient_decomposition(a, bound, depth)
    return 0, {
        "n": part.n,
        "d": part.d,
        "count": len(part.classes),
        "sizes": list(part.sizes),
        "classes": [[[t2, w] for t2, w in cls] for cls in part.classes],
    }


def cmd_filtrate(args):
    sd = load_system(args.system)
    if (args.p is None) != (args.q is None):
        raise ParseError("--p and --q must be given together")
    if args.p is not None:
        if not sd.is_generated:
            raise ParseError("inclusion witnesses need an open enumeration")
        p, q = _germ(args.p), _germ(args.q)
        cap = _resolve(args, sd, "cap", 64)
        level = inclusion_witness(
            Exhaustion(sd.generator, sd.counts),
            p.index, p.point, q.index, q.point, cap,
        )
        return 0, {"p": str(p), "q": str(q), "witness_level": level}

    k = _resolve(args, sd, "level", None if sd.is_generated else 0)
    if k is None:
        raise LevelRequired("--level is needed for an open enumeration")
    n = _resolve(args, sd, "bound", 2)
    g = Exhaustion(sd.generator, sd.counts) if sd.is_generated else sd.generator
    depth = _resolve(args, sd, "depth")
    if depth is None:
        depth = adapted_depth(
            g.action(k) if sd.is_generated else ZPartialAction(sd.generator), n
        )
    tr = truncated_relation(g, k, n, depth)
    payload = tr.to_json()
    payload["count"] = len(tr.classes)
    payload["sizes"] = list(tr.sizes)
    return 0, payload


def cmd_bratteli(args):
    sd = load_system(args.system)
    levels = _resolve(args, sd, "levels", 3)
    g = Exhaustion(sd.generator, sd.counts) if sd.is_generated else sd.generator
    schedule = default_schedule(g, levels)
    diagram = bratteli_build(g, schedule)
    return 0, export(diagram, args.out)


def cmd_verify_psi(args):
    sd = load_system(args.system)
    a = _action(sd)
    level = _resolve(args, sd, "level")
    if sd.is_generated and level is None:
        raise LevelRequired("--level is needed for an open enumeration")
    trials = args.trials
    seed = _resolve(args, sd, "seed", 0)
    report = isomorphism_suite(
        a, trials=trials, seed=seed, max_index=args.support,
        depth=args.depth if args.depth is not None else 6, level=level,
    )
    payload = {"ok": report.ok, "isomorphism": report.to_json()}
    if trials > 0:
        eps, ereport = equivariance_sign(
            a, trials=min(trials, 50), seed=seed, max_index=args.support,
            depth=args.depth if args.depth is not None else 6, level=level,
        )
        payload["equivariance"] = ereport.to_json()
        payload["ok"] = report.ok and ereport.ok
    return (0 if payload["ok"] else 2), payload


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorenv",
        description="Exact analysis of partial integer actions on binary Cantor space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, text):
        sp = sub.add_parser(name, help=text, description=text)
        sp.add_argument("system", help="system definition JSON file")
        sp.set_defaults(func=fn)
        return sp

    sp = command("validate", cmd_validate, "check rule antichains and the action axioms")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--level", type=int)

    sp = command("axioms", cmd_axioms, "run the axiom checker and print its report")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--level", type=int)

    sp = command("hausdorff", cmd_hausdorff, "certify clopen domains or find a boundary witness")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--depth", type=int)

    sp = command("related", cmd_related, "decide whether two germs glue")
    sp.add_argument("--p", required=True, help="germ as 'index:point', e.g. '1:(0)'")
    sp.add_argument("--q", required=True, help="germ as 'index:point'")
    sp.add_argument("--level", type=int)

    sp = command("etale", cmd_etale, "range/source bijectivity over a basic open")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--base", help="clopen set like '{0,11}' (default: the full germ set)")
    sp.add_argument("--level", type=int)

    sp = command("quotient", cmd_quotient, "finite cell decomposition of the germ quotient")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--level", type=int)

    sp = command("filtrate", cmd_filtrate, "stage relations and inclusion witnesses")
    sp.add_argument("--level", type=int)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--p", help="germ as 'index:point'")
    sp.add_argument("--q", help="germ as 'index:point'")

    sp = command("bratteli", cmd_bratteli, "build and export the leveled class diagram")
    sp.add_argument("--levels", type=int)
    sp.add_argument("--out", choices=("json", "dot"), default="json")

    sp = command("verify-psi", cmd_verify_psi, "randomized exact identity suite for the reindexing")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--support", type=int, default=3)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--level", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        code, payload = args.func(args)
    except (
        ParseError,
        LevelRequired,
        DepthTooSmall,
        NotInDomain,
        BaseNotInDomain,
        OSError,
    ) as exc:
        print(json.dumps({"error": str(exc)}))
        return 1
    except (CapExceeded, NotStabilized) as exc:
        print(json.dumps({"error": str(exc)}))
        return 3
    except EngineError as exc:
        print(json.dumps({"error": str(exc)}))
        return 2
    if isinstance(payload, str):
        sys.stdout.write(payload)
    else:
        print(json.dumps(payload, indent=2))
    return code


def entry() -> None:
    raise SystemExit(main(sys.argv[1:]))
