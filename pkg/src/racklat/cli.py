"""Command line surface: build, query, export, and verify subrack lattices.

Exit codes: 0 success, 2 verification failure, 3 input error, 4 cap or
undecided result.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bitset import atom_label, bits, parse_atom
from .catalog import CATALOG, UnknownGroupError, build_group, catalog_entry
from .cycleforms import (all_cycle_forms, associated_abelian, identity_atom,
                         p_nilpotent_from_lattice, refine_to_cycle_form)
from .groups import FiniteGroup, GroupBuildError
from .invariants import invariant_report
from .lattice import CapExceeded, ImplicitOnly, SubrackLattice
from .nilpotence import hypercenter_quotient, nilpotence_class_from_lattice
from .racks import conjugation_quandle
from .verify import p_nilpotence_with_fallback, preferred_mode, verify_catalog

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_INPUT = 3
EXIT_CAP = 4


class CliError(Exception):
    """Carries the exit code alongside the message."""

    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 means verification failure here,
    # so turn them into CliError and let run_cli return the input code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: {message}", EXIT_INPUT)


def _load_group(spec: str) -> tuple[FiniteGroup, bool]:
    """Resolve --group: either catalog:<name> or a path to a JSON file."""
    if spec.startswith("catalog:"):
        try:
            entry = catalog_entry(spec[len("catalog:"):])
        except UnknownGroupError as e:
            raise CliError(str(e), EXIT_INPUT) from None
        return entry.build(), entry.implicit_only
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise CliError(f"cannot read group file {spec}: {e}", EXIT_INPUT) from None
    except json.JSONDecodeError as e:
        raise CliError(f"malformed JSON in {spec}: {e}", EXIT_INPUT) from None
    try:
        return build_group(data), False
    except GroupBuildError as e:
        raise CliError(f"bad group file {spec}: {e}", EXIT_INPUT) from None


def _build_lattice(args) -> tuple[FiniteGroup, SubrackLattice]:
    g, implicit_only = _load_group(args.group)
    if implicit_only and args.mode == "explicit":
        raise CliError(f"{g.name} is catalogued implicit-only", EXIT_INPUT)
    mode = preferred_mode(g, implicit_only) if args.mode == "auto" else args.mode
    return g, SubrackLattice(conjugation_quandle(g), mode=mode)


def _emit_json(obj: dict) -> None:
    print(json.dumps(obj, indent=2))


# -- subcommands ----------------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.format == "json":
        _emit_json({"groups": [
            {"name": e.name, "order": e.order, "implicit_only": e.implicit_only}
            for e in CATALOG]})
    elif args.format == "text":
        for e in CATALOG:
            flag = "  implicit-only" if e.implicit_only else ""
            print(f"{e.name:10s} {e.order:4d}{flag}")
    else:
        raise CliError("catalog supports text or json output", EXIT_INPUT)
    return EXIT_OK


def cmd_lattice(args) -> int:
    g, lat = _build_lattice(args)
    if args.format == "dot":
        if lat.mode != "explicit":
            raise CliError(
                "dot export needs an explicit lattice; pass --mode explicit "
                "to enumerate",
                EXIT_INPUT if args.mode == "implicit" else EXIT_CAP)
        sys.stdout.write(lat.to_dot())
        return EXIT_OK
    if args.format == "json":
        out = {"group": g.name, "order": g.order, "mode": lat.mode,
               "coatoms": [list(bits(c)) for c in lat.coatoms]}
        if lat.mode == "explicit":
            out.update(lat.to_json_dict())
        else:
            out["atoms"] = lat.n_atoms
        _emit_json(out)
        return EXIT_OK
    print(f"group: {g.name} (order {g.order})")
    print(f"atoms: {lat.n_atoms}")
    print(f"mode: {lat.mode}")
    if lat.mode == "explicit":
        print(f"elements: {len(lat.elements)}")
    else:
        print("elements: not materialized")
    print(f"coatoms: {len(lat.coatoms)}")
    return EXIT_OK


def cmd_invariants(args) -> int:
    g, lat = _build_lattice(args)
    rep = invariant_report(lat)
    if args.format == "json":
        out = {"group": g.name, "order": g.order, "mode": lat.mode}
        out.update(rep.to_json_dict())
        _emit_json(out)
    elif args.format == "text":
        print(f"group: {g.name} (order {g.order})")
        print(rep.to_text())
    else:
        raise CliError("invariants supports text or json output", EXIT_INPUT)
    return EXIT_CAP if rep.m_undecided else EXIT_OK


def cmd_nilpotence(args) -> int:
    g, lat = _build_lattice(args)
    res = nilpotence_class_from_lattice(lat, g, seed=args.seed)
    if args.format == "json":
        _emit_json({
            "group": g.name, "order": g.order,
            "nilpotent": res.nilpotent, "class": res.nilpotency_class,
            "steps": [{"atoms": s.atoms, "center": s.center_size,
                       "blocks": s.block_count, "poset": s.poset_size}
                      for s in res.steps],
        })
    elif args.format == "text":
        if args.verbose:
            print(res.to_text())
        else:
            print(f"class {res.nilpotency_class}" if res.nilpotent
                  else "not nilpotent")
    else:
        raise CliError("nilpotence supports text or json output", EXIT_INPUT)
    return EXIT_OK


def cmd_pnilpotence(args) -> int:
    g, lat = _build_lattice(args)
    try:
        if args.mode == "auto":
            res = p_nilpotence_with_fallback(args.p, lat, g, seed=args.seed)
        else:
            res = p_nilpotent_from_lattice(args.p, lat, g, seed=args.seed)
    except ValueError as e:
        raise CliError(str(e), EXIT_INPUT) from None
    verdict = res if isinstance(res, str) else str(res).lower()
    if args.format == "json":
        _emit_json({"group": g.name, "order": g.order, "p": args.p,
                    "p_nilpotent": res if isinstance(res, bool) else None,
                    "verdict": verdict})
    elif args.format == "text":
        if args.verbose:
            _, qg = hypercenter_quotient(lat, g, seed=args.seed)
            print(f"hypercenter quotient: order {len(qg)}")
            print('note: the Sylow member size rule is read as '
                  '"atom count is a multiple of p^k"')
        print(verdict)
    else:
        raise CliError("pnilpotence supports text or json output", EXIT_INPUT)
    return EXIT_CAP if verdict == "undecided (cap)" else EXIT_OK


def cmd_cycleforms(args) -> int:
    g, lat = _build_lattice(args)
    try:
        identity_atom(lat)
    except ValueError as e:
        raise CliError(str(e), EXIT_INPUT) from None
    n = lat.n_atoms
    if args.atom is not None:
        try:
            a = parse_atom(args.atom, n)
        except ValueError as e:
            raise CliError(str(e), EXIT_INPUT) from None
        form = refine_to_cycle_form(lat, a)
        if args.format == "json":
            out = {"group": g.name, "atom": atom_label(a, n)}
            out.update(form.to_json_dict())
            _emit_json(out)
        else:
            print(form.render(n))
            if args.verbose:
                s = associated_abelian(lat, a)
                names = ",".join(atom_label(i, n) for i in bits(s))
                print(f"A({atom_label(a, n)}): {{{names}}}")
        return EXIT_OK
    forms = all_cycle_forms(lat)
    if args.format == "json":
        _emit_json({"group": g.name, "forms": [
            dict({"atom": atom_label(x, n)}, **forms[x].to_json_dict())
            for x in range(n)]})
    else:
        for x in range(n):
            print(f"{atom_label(x, n)}: {forms[x].render(n)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.format == "dot":
        raise CliError("verify supports text or json output", EXIT_INPUT)
    rep = verify_catalog(args.max_order, seed=args.seed)
    if args.format == "json":
        _emit_json(rep.to_json_dict())
    else:
        print(rep.to_text(show_timing=args.verbose))
    return EXIT_OK if rep.passed else EXIT_VERIFY


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="racklat",
                     description="subrack lattices of finite groups and "
                                 "lattice-only structure recovery")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, *, group: bool = True, mode: bool = True):
        if group:
            sp.add_argument("--group", required=True,
                            help="catalog:<name> or path to a JSON group file")
        sp.add_argument("--format", choices=("text", "json", "dot"),
                        default="text")
        if mode:
            sp.add_argument("--mode", choices=("auto", "explicit", "implicit"),
                            default="auto")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--verbose", action="store_true")

    sp = sub.add_parser("lattice", help="build a subrack lattice and export it")
    common(sp)
    sp = sub.add_parser("invariants",
                        help="class sizes, center, A, N, M of the lattice")
    common(sp)
    sp = sub.add_parser("nilpotence",
                        help="nilpotence class from the lattice alone")
    common(sp)
    sp = sub.add_parser("pnilpotence",
                        help="p-nilpotence from the lattice alone")
    common(sp)
    sp.add_argument("--p", type=int, required=True, help="prime to test")
    sp = sub.add_parser("cycleforms",
                        help="cycle forms recovered from the lattice")
    common(sp)
    sp.add_argument("--atom", help="single atom label or index")
    sp = sub.add_parser("verify",
                        help="cross-check the catalog against the oracle")
    common(sp, group=False, mode=False)
    sp.add_argument("--max-order", type=int, default=60, dest="max_order")
    sp = sub.add_parser("catalog", help="list catalog groups")
    common(sp, group=False, mode=False)
    return parser


_HANDLERS = {
    "catalog": cmd_catalog,
    "lattice": cmd_lattice,
    "invariants": cmd_invariants,
    "nilpotence": cmd_nilpotence,
    "pnilpotence": cmd_pnilpotence,
    "cycleforms": cmd_cycleforms,
    "verify": cmd_verify,
}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _HANDLERS[args.command](args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except CapExceeded as e:
        print(f"error: cap exceeded without implicit fallback: {e}",
              file=sys.stderr)
        return EXIT_CAP
    except ImplicitOnly as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
