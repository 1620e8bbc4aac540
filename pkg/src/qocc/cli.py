"""Command line interface: ``qocc encode``, ``qocc classify`` and ``qocc experiment``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import reporting
from .circuits import (
    PreparedSample,
    TrainedModel,
    build_hc_circuit,
    build_qocc_circuit,
    closed_form_membership,
    is_tie,
    hc_label,
    hc_outcome,
    membership_score,
    qocc_decide,
)
from .encoding import LoaderSpec, angles_from_vector, loader_circuit
from .exceptions import QOCCError
from .experiment import ExperimentConfig, run_experiment
from .simulator import Circuit, x


def _normalized(values, what, out):
    v = np.asarray(values, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise QOCCError(f"{what} is the zero vector")
    if abs(norm - 1.0) > 1e-9:
        print(f"note: {what} has norm {norm:.6f}; normalized before encoding", file=out)
    return v / norm


def _parse_control(text):
    try:
        q, b = text.split("=")
        return int(q), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"control must look like QUBIT=BIT, got {text!r}") from None


def _parse_seeds(text):
    seeds = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise argparse.ArgumentTypeError("empty seed list")
    return seeds


def cmd_encode(args, out) -> int:
    v = _normalized(args.values, "input vector", out)
    tree = angles_from_vector(v)
    controls = tuple(args.control or ())
    used = {q for q, _ in controls}
    data = []
    q = 0
    while len(data) < tree.num_qubits:
        if q not in used:
            data.append(q)
        q += 1
    n = max([*data, *used]) + 1
    spec = LoaderSpec(tuple(data), tree, controls)
    gates = loader_circuit(spec)

    print("angles (radians):", file=out)
    for s, angles in tree.as_dict().items():
        print(f"  level {s}: " + ", ".join(f"{a:+.6f}" for a in angles), file=out)
    print(f"gates ({sum(g.kind == 'ry' for g in gates)} rotations):", file=out)
    for g in gates:
        print(f"  {g.label()}", file=out)

    # satisfy the extra controls so the loader acts, then read the data register
    prep = Circuit(n, [x(c) for c, b in controls if b == 1])
    state = Circuit(n, gates).run(prep.run())
    tensor = state.tensor()
    idx = [slice(None)] * n
    for c, b in controls:
        idx[c] = b
    sub = tensor[tuple(idx)]
    kept = [k for k in range(n) if k not in used]
    sub = np.transpose(sub, [kept.index(d) for d in data]).reshape(-1)
    print("amplitudes:", file=out)
    for i, a in enumerate(sub):
        print(f"  |{i:0{tree.num_qubits}b}>  {a.real:+.6f}", file=out)
    err = float(np.max(np.abs(sub - v)))
    print(f"max round-trip error: {err:.3e}", file=out)
    return 0


def cmd_classify(args, out) -> int:
    test = _normalized(args.test, "test vector", out)
    protos = [_normalized(p, f"prototype {i}", out) for i, p in enumerate(args.prototype)]
    shots = args.shots if args.mode == "shots" else None
    kind = args.classifier
    if kind == "hc":
        labels = (args.stored_class, args.other_class)
        model = TrainedModel("hc", tuple(PreparedSample(p, lab) for p, lab in zip(protos, labels)))
        circuit = build_hc_circuit(test, model)
        outcome = hc_outcome(test, model, shots, args.seed)
        print(f"circuit: {circuit.num_qubits} qubits, {len(circuit)} gates", file=out)
        print(f"postselection probability: {outcome.postselection_probability:.6f}", file=out)
        print(f"closed form: {closed_form_membership(test, protos):.6f}", file=out)
        if outcome.surviving_shots is not None:
            print(f"surviving shots: {outcome.surviving_shots}/{shots}", file=out)
        p0, p1 = outcome.distribution
        print(f"class distribution: {labels[0]}: {p0:.6f}  {labels[1]}: {p1:.6f}", file=out)
        print(f"prediction: {hc_label(outcome, model)}", file=out)
        return 0

    model = TrainedModel(kind, tuple(PreparedSample(p, args.stored_class) for p in protos),
                         other_class=args.other_class)
    circuit = build_qocc_circuit(test, model)
    score = membership_score(test, model, shots, args.seed)
    print(f"circuit: {circuit.num_qubits} qubits, {len(circuit)} gates", file=out)
    print(f"membership: {score:.6f}", file=out)
    print(f"closed form: {closed_form_membership(test, protos):.6f}", file=out)
    decision = qocc_decide(score, args.stored_class, args.other_class)
    note = " (tie: 0.5 is not above threshold)" if is_tie(score, 0.5) else ""
    print(f"prediction: {decision}{note}", file=out)
    return 0


CONFIG_KEYS = {
    "dataset", "classifier", "stored_class", "candidates", "shots", "runs", "mode", "seeds",
    "batch", "train_fraction", "data_path",
}


def _experiment_config(args) -> ExperimentConfig:
    values = {}
    if args.config:
        loaded = json.loads(Path(args.config).read_text())
        unknown = set(loaded) - CONFIG_KEYS
        if unknown:
            raise QOCCError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    flag_map = {
        "dataset": args.dataset,
        "classifier": args.classifier,
        "stored_class": args.stored_class,
        "candidates": args.candidates,
        "shots": args.shots,
        "runs": args.runs,
        "mode": args.mode,
        "seeds": args.seeds,
        "batch": args.batch,
        "train_fraction": args.train_fraction,
        "data_path": args.data_path,
    }
    values.update({k: v for k, v in flag_map.items() if v is not None})
    for key in ("dataset", "classifier"):
        if key not in values:
            raise QOCCError(f"--{key} is required (flag or config file)")
    return ExperimentConfig(**values)


def cmd_experiment(args, out) -> int:
    config = _experiment_config(args)
    summary = run_experiment(config).to_dict()
    rendered = {
        "table": lambda: reporting.to_table([summary]),
        "json": lambda: reporting.to_json(summary),
        "csv": lambda: reporting.to_csv([summary]),
    }
    if args.out:
        base = Path(args.out)
        base = base.with_suffix("") if base.suffix in (".json", ".csv") else base
        try:
            base.parent.mkdir(parents=True, exist_ok=True)
            base.with_suffix(".json").write_text(reporting.to_json(summary))
            base.with_suffix(".csv").write_text(reporting.to_csv([summary]))
        except OSError as exc:
            raise QOCCError(f"cannot write report to {base}: {exc}") from exc
    out.write(rendered[args.format]())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qocc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="show the amplitude-encoding circuit for a vector")
    p.add_argument("values", type=float, nargs="+")
    p.add_argument("--control", type=_parse_control, action="append",
                   help="extra control QUBIT=BIT (repeatable)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("classify", help="score one test vector against prototype vector(s)")
    p.add_argument("--test", type=float, nargs="+", required=True)
    p.add_argument("--prototype", type=float, nargs="+", action="append", required=True,
                   help="prototype vector (repeat for a second prototype)")
    p.add_argument("--classifier", choices=("hc", "qocc2", "qocc1"), default="qocc1")
    p.add_argument("--mode", choices=("exact", "shots"), default="exact")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stored-class", type=int, default=0,
                   help="label of the stored class (HC: label of the first prototype)")
    p.add_argument("--other-class", type=int, default=1)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="run the training/validation protocol on a dataset")
    p.add_argument("--config", help="JSON file with experiment settings; flags override it")
    p.add_argument("--dataset", choices=("iris", "haberman", "skin"))
    p.add_argument("--data-path")
    p.add_argument("--classifier", choices=("hc", "qocc2", "qocc1"))
    p.add_argument("--stored-class", type=int)
    p.add_argument("--mode", choices=("exact", "shots"))
    p.add_argument("--shots", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--candidates", type=int)
    p.add_argument("--train-fraction", type=float)
    p.add_argument("--seeds", type=_parse_seeds, help="e.g. 0,1,2 or 0-9")
    p.add_argument("--batch", choices=("0", "1", "2", "3", "all"))
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--out", help="write <out>.json and <out>.csv")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "classify":
        expected = 1 if args.classifier == "qocc1" else 2
        if len(args.prototype) != expected:
            print(f"error: {args.classifier} needs {expected} --prototype vector(s)", file=sys.stderr)
            return 2
    try:
        return args.func(args, out)
    except QOCCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
