"""JSON state files.

Layout::

    {"d": 4, "N": 2,
     "amplitudes": [{"modes": [0, 3], "re": 0.70710678, "im": 0.0}, ...]}

Unlisted basis states have amplitude zero. Extra top-level keys (``seed``,
``description``) are preserved on write and ignored on read.
"""
from __future__ import annotations

import json
from math import comb
from pathlib import Path

import numpy as np

from .errors import FermiTangleError, NormDeviation, StateFileError
from .fock import FermionState, basis_combos, rank_subset

NORM_ACCEPT = 1e-6


def state_to_dict(psi: FermionState, **extra) -> dict:
    combos = basis_combos(psi.d, psi.N)
    entries = []
    for idx in np.flatnonzero(psi.amplitudes != 0):
        c = psi.amplitudes[idx]
        entries.append({"modes": [int(m) for m in combos[idx]], "re": float(c.real), "im": float(c.imag)})
    return {"d": psi.d, "N": psi.N, **extra, "amplitudes": entries}


def dumps_state(psi: FermionState, **extra) -> str:
    """JSON text with one amplitude entry per line."""
    data = state_to_dict(psi, **extra)
    entries = data.pop("amplitudes")
    lines = [f"  {json.dumps(k)}: {json.dumps(v)}," for k, v in data.items()]
    body = ",\n".join(f"    {json.dumps(e)}" for e in entries)
    return "{\n" + "\n".join(lines) + '\n  "amplitudes": [\n' + body + "\n  ]\n}\n"


def save_state(psi: FermionState, path: str | Path, **extra) -> Path:
    path = Path(path)
    path.write_text(dumps_state(psi, **extra))
    return path


def state_from_dict(data) -> FermionState:
    return _parse(data)[0]


def _parse(data) -> tuple[FermionState, float]:
    if not isinstance(data, dict):
        raise StateFileError("top level must be an object")
    try:
        d, n, entries = data["d"], data["N"], data["amplitudes"]
    except KeyError as exc:
        raise StateFileError(f"missing key {exc.args[0]!r}") from None
    if not (isinstance(d, int) and isinstance(n, int)) or isinstance(d, bool) or isinstance(n, bool):
        raise StateFileError("d and N must be integers")
    if not 1 <= n <= d:
        raise StateFileError(f"need 1 <= N <= d, got N={n}, d={d}")
    if not isinstance(entries, list):
        raise StateFileError("amplitudes must be a list")
    amps = np.zeros(comb(d, n), dtype=np.complex128)
    seen = set()
    for entry in entries:
        if not isinstance(entry, dict) or "modes" not in entry:
            raise StateFileError(f"bad amplitude entry {entry!r}")
        modes = entry["modes"]
        if not isinstance(modes, list) or len(modes) != n or not all(isinstance(m, int) for m in modes):
            raise StateFileError(f"entry modes {modes!r} must list {n} integers")
        try:
            re, im = float(entry.get("re", 0.0)), float(entry.get("im", 0.0))
            idx = rank_subset(modes, d)
        except (TypeError, ValueError, FermiTangleError) as exc:
            raise StateFileError(f"bad amplitude entry {entry!r}: {exc}") from None
        if idx in seen:
            raise StateFileError(f"duplicate modes {modes}")
        seen.add(idx)
        amps[idx] = complex(re, im)
    if not np.all(np.isfinite(amps)):
        raise StateFileError("non-finite amplitude")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_ACCEPT:
        raise NormDeviation(f"state norm {norm:.12g} deviates from 1 by more than {NORM_ACCEPT}")
    return FermionState(d, n, amps / norm), norm


def loads_state(text: str, with_norm: bool = False):
    """Parse a state file body; renormalizes when the norm is within 1e-6 of 1.

    With ``with_norm=True`` returns ``(state, norm_as_read)``.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from None
    psi, norm = _parse(data)
    return (psi, norm) if with_norm else psi


def load_state(path: str | Path, with_norm: bool = False):
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from None
    return loads_state(text, with_norm=with_norm)
