"""A small corpus of link diagrams used by the checks and the test-suite.

PD codes list the edges at each crossing counter-clockwise from the
incoming under-strand.  Names carry the sign of the crossings where it
matters: ``trefoil+`` has three positive crossings (the right-handed
trefoil), ``trefoil-`` is its mirror.
"""

from __future__ import annotations

from typing import Dict, List

from .tangles import TangleDiagram, add_kink, pd_to_diagram

PD_CODES: Dict[str, List[List[int]]] = {
    "unknot": [],
    "unknot+kink": [[1, 1, 2, 2]],
    "unknot-kink": [[2, 1, 1, 2]],
    "hopf+": [[4, 2, 3, 1], [2, 4, 1, 3]],
    "hopf-": [[4, 1, 3, 2], [2, 3, 1, 4]],
    "trefoil+": [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]],
    "trefoil-": [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]],
    "figure8": [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]],
    "5_1": [[1, 6, 2, 7], [3, 8, 4, 9], [5, 10, 6, 1], [7, 2, 8, 3], [9, 4, 10, 5]],
    "6_2": [[1, 4, 2, 5], [5, 10, 6, 11], [3, 9, 4, 8], [9, 3, 10, 2], [7, 12, 8, 1], [11, 6, 12, 7]],
}


def corpus() -> Dict[str, TangleDiagram]:
    """Slice words for every PD code of the corpus."""
    return {name: pd_to_diagram(pd) for name, pd in PD_CODES.items()}


def unknot_with_kinks(kinds=("pos", "neg")) -> TangleDiagram:
    """The round unknot with one curl of each requested kind."""
    T = pd_to_diagram([])
    for kind in kinds:
        T = add_kink(T, 1, 0, kind)
    return T
