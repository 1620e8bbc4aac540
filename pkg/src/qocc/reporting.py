"""Render experiment summaries as JSON, CSV and a plain-text results table.

Renderers only format fields that already exist in ``ExperimentSummary.to_dict()``.
"""
from __future__ import annotations

import csv
import io
import json

CSV_FIELDS = ("dataset", "classifier", "stored_class", "mode", "batch", "n_seeds",
              "mean_accuracy", "std_accuracy")
CLASSIFIER_NAMES = {"hc": "HC", "qocc2": "QOCC (2 stored)", "qocc1": "QOCC (1 stored)"}


def to_json(summary_dict: dict) -> str:
    return json.dumps(summary_dict, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _pct(v):
    return f"{100 * v:.2f}%"


def summary_rows(summary_dict: dict) -> list:
    cfg = summary_dict["config"]
    base = {
        "dataset": cfg["dataset"],
        "classifier": cfg["classifier"],
        "stored_class": "" if cfg["classifier"] == "hc" else summary_dict["reports"][0]["stored_class"],
        "mode": cfg["mode"],
        "n_seeds": len(cfg["seeds"]),
    }
    rows = [{**base, "batch": "mean" if summary_dict["batch_accuracies"] else "",
             "mean_accuracy": summary_dict["mean_accuracy"],
             "std_accuracy": summary_dict["std_accuracy"]}]
    if len(summary_dict["batch_accuracies"]) > 1:
        for b, acc in summary_dict["batch_accuracies"].items():
            rows.append({**base, "batch": b, "mean_accuracy": acc, "std_accuracy": ""})
    return rows


def to_csv(summary_dicts) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for s in summary_dicts:
        for row in summary_rows(s):
            writer.writerow(row)
    return buf.getvalue()


def to_table(summary_dicts) -> str:
    header = ("Dataset", "Simul.", "Classifier", "Stored", "Batch", "Accuracy", "Std (seeds)")
    lines = []
    for s in summary_dicts:
        for row in summary_rows(s):
            std = row["std_accuracy"]
            lines.append((
                row["dataset"],
                row["mode"],
                CLASSIFIER_NAMES[row["classifier"]],
                str(row["stored_class"]),
                str(row["batch"]),
                _pct(row["mean_accuracy"]),
                "" if std == "" else _pct(std),
            ))
    widths = [max(len(h), *(len(r[i]) for r in lines)) for i, h in enumerate(header)]
    fmt = " | ".join(f"{{:<{w}}}" for w in widths)
    sep = "-+-".join("-" * w for w in widths)
    out = [fmt.format(*header), sep] + [fmt.format(*r) for r in lines]
    return "\n".join(out) + "\n"
