"""Reference channels and the JSON channel file.

File layout::

    {"k": 2, "p": [0.5, 0.5],
     "outputs": [[[[re, im], ...], ...], ...],
     "bipartite": false}                  # or true with "d_B", "d_E"

Every matrix entry is an explicit ``[re, im]`` pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import qmat
from .packing import CqChannel
from .private import BipartiteCqChannel

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def distinguishable_qubit() -> CqChannel:
    """``0 -> |0><0|``, ``1 -> |1><1|``."""
    return CqChannel((qmat.proj(qmat.ket(0, 2)), qmat.proj(qmat.ket(1, 2))))


def hadamard_qubit() -> CqChannel:
    """The distinguishable qubit with both outputs rotated by a Hadamard."""
    return distinguishable_qubit().rotated(HADAMARD)


def covering_qubit() -> CqChannel:
    """``0 -> |0><0|``, ``1 -> |+><+|``; Holevo quantity about 0.6009 at uniform ``p``."""
    return CqChannel((qmat.proj(qmat.ket(0, 2)), qmat.proj(HADAMARD @ qmat.ket(0, 2))))


def depolarize(rho, prob: float) -> np.ndarray:
    """``(1 - prob) rho + prob I/d``."""
    d = rho.shape[0]
    return (1 - prob) * rho + prob * np.eye(d) / d


def identical_outputs(k: int = 2, d: int = 2) -> CqChannel:
    """Every letter gives ``I/d``; carries no information."""
    return CqChannel(tuple(np.eye(d, dtype=complex) / d for _ in range(k)))


def degraded_eavesdropper(prob: float = 0.8, bob: CqChannel | None = None) -> BipartiteCqChannel:
    """``W^{BE}(x) = W^B(x) (x) depolarize(|x><x|, prob)``.

    Bob defaults to the distinguishable qubit; Eve sees the same basis states
    through a depolarizing channel with probability ``prob``.
    """
    bob = distinguishable_qubit() if bob is None else bob
    outs = tuple(qmat.kron(WB, depolarize(qmat.proj(qmat.ket(x, 2)), prob)) for x, WB in enumerate(bob.outputs))
    return BipartiteCqChannel(outs, bob.d, 2)


# --- channel files ---------------------------------------------------------------------


@dataclass(frozen=True)
class ChannelSpec:
    p: np.ndarray
    outputs: tuple
    bipartite: bool = False
    d_B: int | None = None
    d_E: int | None = None

    @property
    def k(self) -> int:
        return len(self.outputs)

    def channel(self):
        """``CqChannel`` or ``BipartiteCqChannel``; raises ``ValueError`` naming a bad letter."""
        if self.bipartite:
            return BipartiteCqChannel(self.outputs, self.d_B, self.d_E)
        return CqChannel(self.outputs)

    @classmethod
    def of(cls, channel, p) -> "ChannelSpec":
        p = np.asarray(p, dtype=float)
        if isinstance(channel, BipartiteCqChannel):
            return cls(p, channel.outputs, True, channel.d_B, channel.d_E)
        return cls(p, channel.outputs)


def _encode_matrix(A) -> list:
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def _decode_matrix(rows, letter: int) -> np.ndarray:
    try:
        A = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"letter {letter}: matrix is not a nested array of [re, im] pairs") from exc
    if A.ndim != 3 or A.shape[2] != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"letter {letter}: expected a square array of [re, im] pairs, got shape {A.shape}")
    return A[..., 0] + 1j * A[..., 1]


def to_dict(spec: ChannelSpec) -> dict:
    out = {"k": spec.k, "p": [float(v) for v in spec.p], "outputs": [_encode_matrix(W) for W in spec.outputs],
           "bipartite": spec.bipartite}
    if spec.bipartite:
        out["d_B"], out["d_E"] = spec.d_B, spec.d_E
    return out


def from_dict(data: dict) -> ChannelSpec:
    """Parse and validate; the returned spec's ``channel()`` is guaranteed to build."""
    try:
        p = np.asarray(data["p"], dtype=float)
        raw = data["outputs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"channel file needs 'p' and 'outputs': {exc}") from exc
    outs = tuple(_decode_matrix(rows, x) for x, rows in enumerate(raw))
    if "k" in data and int(data["k"]) != len(outs):
        raise ValueError(f"k = {data['k']} but {len(outs)} output matrices given")
    if p.shape != (len(outs),) or np.any(p < 0) or abs(p.sum() - 1) > 1e-9:
        raise ValueError(f"p must be a probability vector over {len(outs)} letters")
    bip = bool(data.get("bipartite", False))
    spec = ChannelSpec(p, outs, bip, data.get("d_B"), data.get("d_E"))
    spec.channel()
    return spec


def save_spec(spec: ChannelSpec, path) -> None:
    Path(path).write_text(json.dumps(to_dict(spec), indent=1) + "\n")


def load_spec(path) -> ChannelSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return from_dict(data)
