import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from matchent import (
    LayeredFamily,
    even_odd_connection,
    identity_connection,
    make_cycle,
    make_edgeless,
    shift_connection,
)
from matchent.thermo import disjoint_krr_family


def corpus_families():
    """The standing test corpus: one family per structural regime."""
    return [
        LayeredFamily(make_edgeless(1), ((1,),), name="cycle"),
        LayeredFamily(make_cycle(4), identity_connection(4), name="c4-identity"),
        LayeredFamily(make_cycle(4), shift_connection(4), name="c4-shift"),
        LayeredFamily(make_cycle(6), even_odd_connection(6), name="c6-evenodd"),
        LayeredFamily(make_cycle(6), identity_connection(6), name="c6-identity"),
        disjoint_krr_family(2),
    ]


@pytest.fixture(scope="session")
def corpus():
    return corpus_families()
