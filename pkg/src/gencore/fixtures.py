"""Small exact matrices with known generalized inverses, used as built-in inputs."""

from __future__ import annotations

from dataclasses import dataclass

from .numfield import Mat


@dataclass(frozen=True)
class Fixture:
    name: str
    rows: tuple
    about: str

    def matrix(self, exact: bool = True) -> Mat:
        return Mat([list(r) for r in self.rows], exact=exact)


_EX4_6 = ((2, 2, 1), (-1, -1, 0), (0, 0, 0))

FIXTURES = {
    f.name: f
    for f in (
        Fixture(
            "ex3_4",
            ((0, 1), (0, 0)),
            "2x2 nilpotent shift, ind 2, A^D = 0; the <1,m>-core system has no solution",
        ),
        Fixture(
            "ex4_5",
            ((0, 1, 0), (0, 0, 1), (0, 0, 0)),
            "3x3 upper shift, ind 3, A^3 = 0; the (3,1)-core system is solved by X = 0",
        ),
        Fixture(
            "ex4_6",
            _EX4_6,
            "ind 2 with A^D = A^2; the (2,1)-core system has no solution",
        ),
        Fixture(
            "ex4_6_sq",
            ((2, 2, 2), (-1, -1, -1), (0, 0, 0)),
            "square of ex4_6, rank 1; pseudoinverse (1/15)[[2,-1,0],[2,-1,0],[2,-1,0]]",
        ),
    )
}


def get(name: str, exact: bool = True) -> Mat:
    try:
        return FIXTURES[name].matrix(exact)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
