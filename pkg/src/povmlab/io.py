"""CSV interchange for matrices and partition POVMs.

Matrices serialize row-major with 're,im' column pairs, one matrix row per
CSV row. A partition POVM serializes as a directory of matrix CSVs plus a
manifest.txt with one 'label,value,filename' line per outcome (value left
empty when the partition carries no real outcome values).
"""

from __future__ import annotations

import os
import numpy as np

from .effects import DEFAULT_TOL, ToleranceConfig, validate_effect
from .povm import PartitionPOVM, partition_povm


def save_matrix_csv(path: str, matrix: np.ndarray) -> None:
    M = np.asarray(matrix, dtype=complex)
    with open(path, "w", encoding="ascii") as fh:
        for row in M:
            cells = []
            for entry in row:
                cells.append(repr(float(entry.real)))
                cells.append(repr(float(entry.imag)))
            fh.write(",".join(cells) + "\n")


def load_matrix_csv(path: str) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            cells = [float(tok) for tok in line.split(",")]
            if len(cells) % 2 != 0:
                raise ValueError(f"{path}: expected re,im pairs per row")
            rows.append([complex(cells[i], cells[i + 1]) for i in range(0, len(cells), 2)])
    M = np.asarray(rows, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{path}: expected a square matrix, got shape {M.shape}")
    return M


def save_povm_dir(path: str, povm: PartitionPOVM) -> None:
    os.makedirs(path, exist_ok=True)
    lines = []
    for i, (label, effect) in enumerate(zip(povm.labels, povm.effects)):
        fname = f"effect_{i:03d}.csv"
        save_matrix_csv(os.path.join(path, fname), effect.matrix)
        value = "" if povm.values is None else repr(float(povm.values[i]))
        lines.append(f"{label},{value},{fname}")
    with open(os.path.join(path, "manifest.txt"), "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_povm_dir(
    path: str, cfg: ToleranceConfig = DEFAULT_TOL, sum_tol: float = 1e-8
) -> PartitionPOVM:
    manifest = os.path.join(path, "manifest.txt")
    labels, values, effects = [], [], []
    any_value = False
    with open(manifest, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            label, value, fname = line.split(",")
            labels.append(label)
            if value:
                any_value = True
                values.append(float(value))
            else:
                values.append(None)
            effects.append(validate_effect(load_matrix_csv(os.path.join(path, fname)), cfg))
    if any_value and any(v is None for v in values):
        raise ValueError(f"{manifest}: values must be given for all outcomes or none")
    return partition_povm(
        effects, labels, values if any_value else None, sum_tol=sum_tol
    )
