"""Counting additive triples of bijections {1..n} -> Z/nZ.

The count equals n! times the number of orthomorphisms of Z/nZ
(equivalently: nonattacking toroidal semiqueen arrangements, or
transversals of the cyclic Latin square).  The package pairs exact
brute-force oracles with the Fourier-side machinery that explains the
count, and verifies every formula and bound at desk scale.
"""

from .characters import CharacterMultiset, CyclicGroup, enumerate_orbits, orbit_count
from .errors import EvenOrderError, LimitExceeded, MemoCapacityExceeded, PrecisionExhausted
from .exactnum import Cyclotomic, LogMagnitude, TrackedComplex, log_combinatorial, multinomial
from .fourier import (
    FourierRecursion,
    FourierValue,
    cube_sum,
    fourier_by_partitions,
    fourier_by_recursion,
    parseval_sum,
    spectrum,
)
from .oracles import (
    CountResult,
    GroupSpec,
    count_general_group,
    count_orthomorphisms,
    count_triples_direct,
    fourier_brute,
    monte_carlo_collision,
)
from .partitions import SetPartition, all_set_partitions, bell_number, killing_partitions
from .structured import structured_coefficient, third_division_character

__version__ = "0.1.0"

__all__ = [
    "CharacterMultiset",
    "CountResult",
    "CyclicGroup",
    "Cyclotomic",
    "EvenOrderError",
    "FourierRecursion",
    "FourierValue",
    "GroupSpec",
    "LimitExceeded",
    "LogMagnitude",
    "MemoCapacityExceeded",
    "PrecisionExhausted",
    "SetPartition",
    "TrackedComplex",
    "all_set_partitions",
    "bell_number",
    "count_general_group",
    "count_orthomorphisms",
    "count_triples_direct",
    "cube_sum",
    "enumerate_orbits",
    "fourier_brute",
    "fourier_by_partitions",
    "fourier_by_recursion",
    "killing_partitions",
    "log_combinatorial",
    "monte_carlo_collision",
    "multinomial",
    "orbit_count",
    "parseval_sum",
    "spectrum",
    "structured_coefficient",
    "third_division_character",
]
