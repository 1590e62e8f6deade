"""
Bidegrees and Enumeration Windows

Bidegree (n, i) is cohomological degree n and weight i of a class in
H^{n,i}. Window bounds what the enumerators produce.
"""

from dataclasses import dataclass
from typing import List, Optional


@dataclass(frozen=True, order=True)
class Bidegree:
    """A (degree, weight) pair with componentwise addition."""
    deg: int
    weight: int

    def __add__(self, other: 'Bidegree') -> 'Bidegree':
        return Bidegree(self.deg + other.deg, self.weight + other.weight)

    def __sub__(self, other: 'Bidegree') -> 'Bidegree':
        return Bidegree(self.deg - other.deg, self.weight - other.weight)

    def scale(self, k: int) -> 'Bidegree':
        return Bidegree(self.deg * k, self.weight * k)

    def twist_mod(self, d: int) -> 'Bidegree':
        """Same degree, weight read mod d (étale twist)."""
        return Bidegree(self.deg, self.weight % d)

    def as_list(self) -> List[int]:
        return [self.deg, self.weight]

    def __str__(self):
        return f"({self.deg},{self.weight})"


@dataclass(frozen=True)
class Window:
    """
    Enumeration window: degrees ≤ max_degree and, when set, weights ≤ max_weight.
    """
    max_degree: int
    max_weight: Optional[int] = None

    def contains(self, b: Bidegree) -> bool:
        if b.deg > self.max_degree:
            return False
        return self.max_weight is None or b.weight <= self.max_weight
