"""Canonical test systems."""
from __future__ import annotations

from .measures import Bernoulli, Markov, parry_measure
from .symbolic import SubshiftSpec, as_word
from .errors import UnsupportedSpec


def golden_mean_system() -> tuple[SubshiftSpec, Markov]:
    """SFT forbidding ``11`` with its Parry measure."""
    spec = SubshiftSpec.sft(2, ["11"])
    return spec, parry_measure(spec)


def full_shift_system(k: int = 2, weights=None) -> tuple[SubshiftSpec, Bernoulli]:
    weights = weights if weights is not None else [1.0 / k] * k
    return SubshiftSpec.full_shift(k), Bernoulli(weights)


def fixed_point_system() -> SubshiftSpec:
    """``{0^infinity}`` as the SFT over {0, 1} forbidding the symbol 1."""
    return SubshiftSpec.sft(2, ["1"])


def tame_spec(which: str = "p") -> SubshiftSpec:
    return SubshiftSpec.generator("tame", 2, which=which)


def generator_segment(spec: SubshiftSpec, a: int, b: int) -> tuple:
    if spec.name == "tame":
        from .tame import cached_tame
        which = spec.param("which", "p")
        n = max(b, 1)
        # round up so that nearby requests share one construction
        ex = cached_tame(1 << (n - 1).bit_length())
        seq = ex.p if which == "p" else ex.q
        return tuple(int(seq[i]) if i >= 0 else 0 for i in range(a, b))
    if spec.name == "periodic":
        w = as_word(spec.param("word", "0"))
        return tuple(w[i % len(w)] for i in range(a, b))
    raise UnsupportedSpec(f"unknown generator {spec.name!r}")
