"""Conventional quantum switch over two qubit channels.

The switch operators on system (x) control are

    W_ij = K_i^(1)(late) K_j^(2)(early) (x) |0><0|
         + K_j^(2)(late) K_i^(1)(early) (x) |1><1|

with the same operator index reused for a channel's two time slots. The
post-selected output on a control branch |+/-> is reported together with
the branch probability N.

Two modes are provided. ``time_split`` instantiates each channel on the
two sub-intervals cut at ``split``; ``static`` places each channel's full
interval map in both of its slots, which is the form used when one of the
inputs is a plain gate.

``commutativity_defect`` measures the residual

    Y_ij = K_j^(2)(t2, s) K_i^(1)(s, t1) - K_i^(1)(t2, s) K_j^(2)(s, t1)

whose vanishing on all sub-splits certifies that the switched dynamics
composes as a completely positive family. For duration-parametrized
families the scalar coefficients make Y vanish only on duration-symmetric
triples (s the midpoint of (t1, t2)); certificate grids here are therefore
built from midpoint triples, matching the t1 = t, t2 = 2t convention used
by every experiment in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .channels import (ChannelFamily, DensityMatrix, KrausChannel,
                       make_channel, plus_state)

TIME_SPLIT = "time_split"
STATIC = "static"

_P0 = np.diag([1.0, 0.0]).astype(complex)
_P1 = np.diag([0.0, 1.0]).astype(complex)

MIN_BRANCH_PROB = 1e-14


@dataclass
class SwitchConfig:
    """Switch geometry: interval, split point, control state and branch."""

    mode: str
    t1: float = 0.0
    t2: float = 0.0
    split: float | None = None
    control_state: DensityMatrix = field(default_factory=plus_state)
    branch: str = "plus"

    def __post_init__(self):
        if self.mode not in (TIME_SPLIT, STATIC):
            raise ValueError(f"mode must be '{TIME_SPLIT}' or '{STATIC}'")
        if self.branch not in ("plus", "minus"):
            raise ValueError("branch must be 'plus' or 'minus'")
        if not (0.0 <= self.t1 <= self.t2):
            raise ValueError(f"need 0 <= t1 <= t2, got ({self.t1}, {self.t2})")
        if self.mode == TIME_SPLIT:
            if self.split is None:
                raise ValueError("time_split mode needs a split point")
            if not (self.t1 <= self.split <= self.t2):
                raise ValueError(f"split {self.split} outside [{self.t1}, {self.t2}]")
        if self.control_state.dim != 2:
            raise ValueError("control must be a qubit")


@dataclass
class SwitchOutcome:
    """Post-selected system state and the branch probability."""

    state: DensityMatrix
    prob: float


@dataclass
class CommutativityReport:
    max_defect: float
    worst_triple: tuple
    worst_pair: tuple


def build_switch_kraus(ch1_late: KrausChannel, ch1_early: KrausChannel,
                       ch2_late: KrausChannel, ch2_early: KrausChannel,
                       independent_indices: bool = False) -> list:
    """Switch operators on system (x) control.

    With ``independent_indices`` the two branches enumerate their operator
    pairs independently (each branch term scaled by the square root of the
    other branch's multiplicity, keeping the family trace preserving). This
    variant decoheres the pairing between the branches and is exposed for
    comparison only.
    """
    dims = {c.dim for c in (ch1_late, ch1_early, ch2_late, ch2_early)}
    if len(dims) != 1:
        raise ValueError(f"all channels must share the system dimension, got {dims}")
    if len(ch1_late.kraus) != len(ch1_early.kraus):
        raise ValueError("channel 1 has mismatched Kraus counts in its two slots")
    if len(ch2_late.kraus) != len(ch2_early.kraus):
        raise ValueError("channel 2 has mismatched Kraus counts in its two slots")

    if not independent_indices:
        return [np.kron(k1l @ k2e, _P0) + np.kron(k2l @ k1e, _P1)
                for k1l, k1e in zip(ch1_late.kraus, ch1_early.kraus)
                for k2l, k2e in zip(ch2_late.kraus, ch2_early.kraus)]

    branch0 = [k1l @ k2e for k1l in ch1_late.kraus for k2e in ch2_early.kraus]
    branch1 = [k2l @ k1e for k2l in ch2_late.kraus for k1e in ch1_early.kraus]
    n0, n1 = len(branch0), len(branch1)
    return [np.kron(a / np.sqrt(n1), _P0) + np.kron(b / np.sqrt(n0), _P1)
            for a in branch0 for b in branch1]


def pad_kraus(ch: KrausChannel, count: int) -> KrausChannel:
    """Extend a Kraus family with zero operators up to ``count`` entries."""
    if count < len(ch.kraus):
        raise ValueError("cannot pad to fewer operators")
    zeros = (np.zeros((ch.dim, ch.dim), dtype=complex),) * (count - len(ch.kraus))
    return KrausChannel(ch.kraus + zeros, label=ch.label, interval=ch.interval)


def _branch_vector(branch: str) -> np.ndarray:
    sign = 1.0 if branch == "plus" else -1.0
    return np.array([1.0, sign], dtype=complex) / np.sqrt(2.0)


def apply_switch_kraus(w_ops, rho: DensityMatrix, control: DensityMatrix,
                       branch: str = "plus") -> SwitchOutcome:
    """Run prebuilt switch operators and post-select the control."""
    d = rho.dim
    ws = np.stack(w_ops)
    rho_tot = np.kron(rho.mat, control.mat)
    big = np.einsum("kij,jl,kml->im", ws, rho_tot, ws.conj())
    b = _branch_vector(branch)
    blocks = big.reshape(d, 2, d, 2)
    projected = np.einsum("c,scpd,d->sp", b.conj(), blocks, b)
    prob = float(np.trace(projected).real)
    if prob < MIN_BRANCH_PROB:
        raise ValueError(f"post-selection impossible: branch probability {prob:.3e}")
    return SwitchOutcome(state=DensityMatrix(projected / prob), prob=prob)


def apply_cqs_channels(cfg: SwitchConfig, ch1_late, ch1_early, ch2_late, ch2_early,
                       rho: DensityMatrix,
                       independent_indices: bool = False) -> SwitchOutcome:
    ws = build_switch_kraus(ch1_late, ch1_early, ch2_late, ch2_early,
                            independent_indices=independent_indices)
    return apply_switch_kraus(ws, rho, cfg.control_state, cfg.branch)


def apply_cqs(cfg: SwitchConfig, fam1: ChannelFamily, fam2: ChannelFamily,
              rho: DensityMatrix, independent_indices: bool = False) -> SwitchOutcome:
    """Switch two channel families around ``cfg`` and post-select."""
    if cfg.mode == TIME_SPLIT:
        ch1_early = make_channel(fam1, cfg.t1, cfg.split)
        ch1_late = make_channel(fam1, cfg.split, cfg.t2)
        ch2_early = make_channel(fam2, cfg.t1, cfg.split)
        ch2_late = make_channel(fam2, cfg.split, cfg.t2)
    else:
        ch1_late = ch1_early = make_channel(fam1, cfg.t1, cfg.t2)
        ch2_late = ch2_early = make_channel(fam2, cfg.t1, cfg.t2)
    return apply_cqs_channels(cfg, ch1_late, ch1_early, ch2_late, ch2_early, rho,
                              independent_indices=independent_indices)


def _interval_slots(fam1, fam2, t1, s, t2):
    k1_late = make_channel(fam1, s, t2).kraus
    k1_early = make_channel(fam1, t1, s).kraus
    k2_late = make_channel(fam2, s, t2).kraus
    k2_early = make_channel(fam2, t1, s).kraus
    return k1_late, k1_early, k2_late, k2_early


def sigma_interval_map(fam1: ChannelFamily, fam2: ChannelFamily,
                       t1: float, s: float, t2: float, rho) -> np.ndarray:
    """Quarter-weighted four-term switch expression over (t1, s, t2).

    This is the unnormalized plus-branch output for a |+> control. Its
    trace equals 1 exactly when the cross-ordering residual Y vanishes at
    this triple; the trace deficit otherwise measures the failure.
    """
    if not (0.0 <= t1 <= s <= t2):
        raise ValueError(f"need 0 <= t1 <= s <= t2, got ({t1}, {s}, {t2})")
    mat = rho.mat if isinstance(rho, DensityMatrix) else linalg.as_complex_matrix(rho)
    k1l, k1e, k2l, k2e = _interval_slots(fam1, fam2, t1, s, t2)
    out = np.zeros_like(mat)
    for i in range(len(k1l)):
        for j in range(len(k2l)):
            a = k1l[i] @ k2e[j]
            b = k2l[j] @ k1e[i]
            out += 0.25 * (b @ mat @ b.conj().T + b @ mat @ a.conj().T
                           + a @ mat @ a.conj().T + a @ mat @ b.conj().T)
    return out


def sigma_two_stage(fam1: ChannelFamily, fam2: ChannelFamily,
                    t2: float, t1: float, s2: float, s1: float, rho) -> np.ndarray:
    """Sixteen-index two-stage switch expression, control carried through.

    Stage one runs over (0, s1, t1), stage two over (t1, s2, t2); the
    control qubit is projected once, after both stages, so each term pairs
    the per-stage branch products coherently.
    """
    if not (0.0 <= s1 <= t1 <= s2 <= t2):
        raise ValueError(f"need 0 <= s1 <= t1 <= s2 <= t2, got "
                         f"({s1}, {t1}, {s2}, {t2})")
    mat = rho.mat if isinstance(rho, DensityMatrix) else linalg.as_complex_matrix(rho)
    k1l2, k1e2, k2l2, k2e2 = _interval_slots(fam1, fam2, t1, s2, t2)
    k1l1, k1e1, k2l1, k2e1 = _interval_slots(fam1, fam2, 0.0, s1, t1)
    out = np.zeros_like(mat)
    for m in range(len(k1l2)):
        for n in range(len(k2l2)):
            a2 = k1l2[m] @ k2e2[n]
            b2 = k2l2[n] @ k1e2[m]
            for i in range(len(k1l1)):
                for j in range(len(k2l1)):
                    aa = a2 @ (k1l1[i] @ k2e1[j])
                    bb = b2 @ (k2l1[j] @ k1e1[i])
                    out += 0.25 * (bb @ mat @ bb.conj().T + bb @ mat @ aa.conj().T
                                   + aa @ mat @ aa.conj().T + aa @ mat @ bb.conj().T)
    return out


def commutativity_defect(fam1: ChannelFamily, fam2: ChannelFamily,
                         grid) -> CommutativityReport:
    """Largest cross-ordering residual over a grid of (t1, s, t2) triples."""
    worst = 0.0
    worst_triple = None
    worst_pair = None
    for (t1, s, t2) in grid:
        if not (0.0 <= t1 <= s <= t2):
            raise ValueError(f"triple ({t1}, {s}, {t2}) is not ordered")
        k1l, k1e, k2l, k2e = _interval_slots(fam1, fam2, t1, s, t2)
        for i in range(len(k1l)):
            for j in range(len(k2l)):
                y = k2l[j] @ k1e[i] - k1l[i] @ k2e[j]
                norm = linalg.trace_norm(y)
                if norm > worst:
                    worst = norm
                    worst_triple = (t1, s, t2)
                    worst_pair = (i, j)
    if worst_triple is None:
        worst_triple = tuple(grid[0]) if len(grid) else (0.0, 0.0, 0.0)
        worst_pair = (0, 0)
    return CommutativityReport(max_defect=worst, worst_triple=worst_triple,
                               worst_pair=worst_pair)


def midpoint_triple(t_start: float, half_width: float) -> tuple:
    return (t_start, t_start + half_width, t_start + 2.0 * half_width)


def default_certificate_grid() -> tuple:
    """27 duration-symmetric triples spanning [0, 3]."""
    starts = np.linspace(0.0, 1.8, 9)
    half_widths = (0.1, 0.3, 0.6)
    return tuple(midpoint_triple(float(a), w) for a in starts for w in half_widths)
