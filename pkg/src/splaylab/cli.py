"""Command-line front end.

    splaylab reproduce
    splaylab scan --channel splaying --family symmetric-pair --alpha-min 0 --alpha-max 3.14159 --steps 101 --out scan.csv
    splaylab optimize --channel amplitude-damping:0.75 --family binary-general --restarts 16 --seed 7 --out result.json
    splaylab channel validate|affine <file|builtin>

Exit codes: 0 success, 1 validation or acceptance failure, 2 bad input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import (
    KrausChannel,
    affine_of_channel,
    amplitude_damping,
    identity_channel,
    splaying_kraus,
    splaying_measure_prepare,
    validate_kraus,
)
from .infotheory import (
    BinaryEnsembleSpec,
    accessible_info_binary_symmetric,
    holevo_quantity,
)
from .optimize import (
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    FAMILIES,
    best_binary_ensemble,
    best_individual_measurement_info,
    best_k_state_ensemble,
    best_orthogonal_capacity,
    best_symmetric_pair,
    maximize_1d,
    symmetric_pair,
)
from .states import angles_to_bloch, bloch_matrix, density_to_bloch, DensityOperator

EXIT_OK, EXIT_FAIL, EXIT_BAD_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3
SCAN_RESTARTS = 4
C_ORTHO = math.log2(3125 / 1024) / 6


class ChannelSpecError(ValueError):
    pass


def parse_builtin(name: str) -> KrausChannel:
    base, _, param = name.partition(":")
    if base == "splaying" and not param:
        return splaying_kraus()
    if base == "identity" and not param:
        return identity_channel(2)
    if base == "amplitude-damping" and param:
        try:
            gamma = float(param)
        except ValueError:
            raise ChannelSpecError(f"bad damping strength {param!r}") from None
        if not 0.0 <= gamma <= 1.0:
            raise ChannelSpecError(f"damping strength must lie in [0, 1], got {gamma}")
        return amplitude_damping(gamma)
    raise ChannelSpecError(
        f"unknown builtin channel {name!r}; expected splaying, identity or amplitude-damping:<gamma>"
    )


def parse_channel_doc(doc) -> KrausChannel:
    """Build a channel from a parsed channel-spec document.

    Either ``{"builtin": "<name>"}`` or ``{"dim": d, "kraus": [...]}``, where
    each Kraus matrix is a row-major list of rows of ``[re, im]`` pairs.
    """
    if not isinstance(doc, dict):
        raise ChannelSpecError("channel spec must be a JSON object")
    if "builtin" in doc:
        return parse_builtin(str(doc["builtin"]))
    if "kraus" not in doc:
        raise ChannelSpecError("channel spec needs a 'builtin' or a 'kraus' entry")
    try:
        ops = [np.array([[complex(re, im) for re, im in row] for row in mat]) for mat in doc["kraus"]]
    except (TypeError, ValueError) as exc:
        raise ChannelSpecError(f"malformed Kraus matrix: {exc}") from None
    dim = doc.get("dim")
    if not ops or any(op.ndim != 2 or op.shape != (dim, dim) for op in ops):
        raise ChannelSpecError(f"Kraus matrices must all be {dim}x{dim}")
    try:
        return KrausChannel(tuple(ops))
    except ValueError as exc:
        raise ChannelSpecError(str(exc)) from None


def load_channel(arg: str) -> KrausChannel:
    """Resolve a ``--channel`` argument: a builtin name or a JSON spec file."""
    path = Path(arg)
    if not path.is_file():
        return parse_builtin(arg)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ChannelSpecError(f"cannot read channel spec {arg}: {exc}") from None
    return parse_channel_doc(doc)


def load_valid_qubit_channel(arg: str) -> KrausChannel:
    c = load_channel(arg)
    if not c.report.ok:
        raise ChannelSpecError(f"channel fails completeness (deviation {c.report.deviation:.3g})")
    if c.dim != 2:
        raise ChannelSpecError("this command needs a qubit channel")
    return c


def _g12(x: float) -> float:
    return float(f"{x:.12g}")


def _round_tree(obj):
    if isinstance(obj, (float, np.floating)):
        return _g12(float(obj))
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_round_tree(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    return obj


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    expected: str
    computed: float
    tolerance: str
    passed: bool


def kraus_vs_measure_prepare(samples: int = 1000, seed: int = 0) -> float:
    """Largest entrywise gap between the two splaying representations over
    seeded random pure inputs."""
    kraus, mp = splaying_kraus(), splaying_measure_prepare()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in rng.normal(size=(samples, 3)):
        rho = DensityOperator(bloch_matrix(r / np.linalg.norm(r)))
        worst = max(worst, float(np.max(np.abs(kraus(rho).mat - mp(rho).mat))))
    return worst


def symmetric_accessible_info(alpha: float, bmap) -> float:
    a = bmap.m @ angles_to_bloch(alpha, math.pi / 2) + bmap.e
    b = bmap.m @ angles_to_bloch(-alpha, math.pi / 2) + bmap.e
    return accessible_info_binary_symmetric(a, b)


def run_reproduce() -> list[Check]:
    channel = splaying_kraus()
    bmap = affine_of_channel(channel)
    checks = []

    ortho = best_orthogonal_capacity(channel)
    checks.append(Check("C_ortho (bits)", f"{C_ORTHO:.7f}", ortho.value, "1e-5", abs(ortho.value - C_ORTHO) <= 1e-5))

    nono = maximize_1d(lambda a: holevo_quantity(symmetric_pair(a), channel), 0.0, math.pi)
    checks.append(Check("C_nono (bits)", "0.268932", nono.value, "1e-4", abs(nono.value - 0.268932) <= 1e-4))
    angle = float(nono.argument[0])
    checks.append(Check("C_nono angle (rad)", "1.521808", angle, "2e-3", abs(angle - 1.521808) <= 2e-3))

    i1_peak = maximize_1d(lambda a: symmetric_accessible_info(a, bmap), 0.0, math.pi)
    peak = float(i1_peak.argument[0])
    spec = BinaryEnsembleSpec(angles_to_bloch(peak, math.pi / 2), angles_to_bloch(-peak, math.pi / 2), 0.5)
    i1 = best_individual_measurement_info(spec, bmap)
    checks.append(Check("I1 max (bits)", "0.255992", i1.value, "1e-4", abs(i1.value - 0.255992) <= 1e-4))
    checks.append(Check("I1 max angle (rad)", f"{math.pi / 2:.6f}", peak, "2e-3", abs(peak - math.pi / 2) <= 2e-3))

    binary = best_binary_ensemble(channel)
    gap = binary.value - ortho.value
    checks.append(Check("C_binary - C_ortho (bits)", ">= 5e-4", gap, "-", gap >= 5e-4))
    checks.append(Check("optimal pair overlap", "> 0.001", binary.overlap, "-", binary.overlap > 1e-3))

    dev = kraus_vs_measure_prepare()
    checks.append(Check("Kraus vs measure-prepare", "0", dev, "1e-12", dev <= 1e-12))
    return checks


def cmd_reproduce(args) -> int:
    start = time.perf_counter()
    checks = run_reproduce()
    width = max(len(c.name) for c in checks)
    print(f"{'quantity':<{width}}  {'expected':>10}  {'computed':>18}  {'tol':>6}  verdict")
    for c in checks:
        print(f"{c.name:<{width}}  {c.expected:>10}  {c.computed:>18.12g}  {c.tolerance:>6}  {'PASS' if c.passed else 'FAIL'}")
    print(f"elapsed {time.perf_counter() - start:.1f} s")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# ---------------------------------------------------------------------------
# scan / optimize / channel
# ---------------------------------------------------------------------------


def scan_rows(channel, alpha_min: float, alpha_max: float, steps: int):
    """Holevo quantity and optimized single-measurement information of the
    symmetric pair on an even ``alpha`` grid."""
    bmap = affine_of_channel(channel)
    rows = []
    for alpha in np.linspace(alpha_min, alpha_max, steps):
        alpha = float(alpha)
        holevo = holevo_quantity(symmetric_pair(alpha), channel)
        spec = BinaryEnsembleSpec(angles_to_bloch(alpha, math.pi / 2), angles_to_bloch(-alpha, math.pi / 2), 0.5)
        accessible = best_individual_measurement_info(spec, bmap, SCAN_RESTARTS, DEFAULT_SEED).value
        rows.append((alpha, holevo, accessible))
    return rows


def cmd_scan(args) -> int:
    if args.family != "symmetric-pair":
        raise ChannelSpecError("scan supports only the symmetric-pair family")
    if args.steps < 2:
        raise ChannelSpecError("--steps must be at least 2")
    channel = load_valid_qubit_channel(args.channel)
    rows = scan_rows(channel, args.alpha_min, args.alpha_max, args.steps)
    try:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["alpha", "holevo_bits", "accessible_bits"])
            for row in rows:
                writer.writerow([f"{v:.9g}" for v in row])
    except OSError as exc:
        raise ChannelSpecError(f"cannot write {args.out}: {exc}") from None
    return EXIT_OK


def optimize_document(channel, family: str, restarts: int, seed: int, k: int = 4) -> dict:
    if family == "orthogonal-pair":
        res = best_orthogonal_capacity(channel, restarts, seed)
    elif family == "symmetric-pair":
        res = best_symmetric_pair(channel)
    elif family == "binary-general":
        res = best_binary_ensemble(channel, restarts, seed)
    elif family == "k-state":
        res = best_k_state_ensemble(channel, k, restarts, seed)
    else:
        raise ChannelSpecError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    ens = res.ensemble
    return _round_tree({
        "family": family,
        "value_bits": res.value,
        "argument": list(res.argument),
        "priors": list(ens.priors),
        "bloch_vectors": [list(density_to_bloch(s)) for s in ens.states],
        "overlaps": list(res.overlaps),
        "seed": seed,
        "restarts": res.restarts_used,
        "evaluations": res.evaluations,
        "converged": res.converged,
    })


def cmd_optimize(args) -> int:
    channel = load_valid_qubit_channel(args.channel)
    if args.restarts < 1:
        raise ChannelSpecError("--restarts must be positive")
    doc = optimize_document(channel, args.family, args.restarts, args.seed, args.k)
    doc = {"channel": args.channel, **doc}
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise ChannelSpecError(f"cannot write {args.out}: {exc}") from None
    else:
        sys.stdout.write(text)
    if not doc["converged"]:
        print("warning: optimizer did not reach the simplex tolerance", file=sys.stderr)
    return EXIT_OK


def _fmt_entry(v: float) -> str:
    # roundoff from the Pauli traces otherwise prints as -2e-17 or -0
    return f"{(0.0 if abs(v) < 1e-14 else v) + 0.0:.12g}"


def cmd_channel(args) -> int:
    channel = load_channel(args.spec)
    report = validate_kraus(channel)
    if args.action == "validate":
        print(f"completeness deviation {report.deviation:.3e}")
        print("PASS" if report.ok else "FAIL")
        return EXIT_OK if report.ok else EXIT_FAIL
    if not report.ok:
        print(f"FAIL: completeness deviation {report.deviation:.3e}")
        return EXIT_FAIL
    bmap = affine_of_channel(channel)
    print("M =")
    for row in bmap.m:
        print("  " + "  ".join(_fmt_entry(v) for v in row))
    print("e =")
    print("  " + "  ".join(_fmt_entry(v) for v in bmap.e))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splaylab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="recompute the headline splaying-channel numbers")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("scan", help="symmetric-pair alpha scan to CSV")
    p.add_argument("--channel", required=True, help="builtin name or channel-spec JSON file")
    p.add_argument("--family", default="symmetric-pair")
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=math.pi)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("optimize", help="maximize the Holevo quantity over an ensemble family")
    p.add_argument("--channel", required=True)
    p.add_argument("--family", required=True, help=", ".join(FAMILIES))
    p.add_argument("--k", type=int, default=4, help="ensemble size for the k-state family")
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("channel", help="validate a channel or print its affine Bloch map")
    p.add_argument("action", choices=("validate", "affine"))
    p.add_argument("spec")
    p.set_defaults(func=cmd_channel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
