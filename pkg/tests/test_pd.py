import json

import pytest

from khodetect.khovanov import PDError, make_pd, parse_diagram, parse_pd
from khodetect.khovanov.diagrams import braid_closure, disjoint_union

HOPF = [[1, 3, 2, 4], [3, 1, 4, 2]]
TREFOIL = [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]


def test_parse_examples():
    pd = parse_pd('{"pd": [], "free_loops": 1}')
    assert pd.n_crossings == 0 and pd.n_edges == 1 and len(pd.components) == 1
    pd = parse_pd(json.dumps({"pd": HOPF}))
    assert pd.n_crossings == 2 and pd.n_edges == 4 and len(pd.components) == 2
    pd = parse_pd({"pd": TREFOIL})
    assert pd.n_edges == 6 and len(pd.components) == 1


def test_each_edge_appears_twice():
    for x in (HOPF, TREFOIL):
        pd = make_pd(x)
        counts = {}
        for c in pd.crossings:
            for e in c:
                counts[e] = counts.get(e, 0) + 1
        assert set(counts.values()) == {2} and sorted(counts) == list(pd.edges)


def test_signs_from_orientation():
    assert make_pd(HOPF).signs == (1, 1)
    assert make_pd(TREFOIL).signs == (-1, -1, -1)
    assert make_pd(TREFOIL).mirror().signs == (1, 1, 1)
    # an explicit array wins
    assert make_pd(HOPF, 0, [-1, -1]).signs == (-1, -1)


def test_kinks():
    # the two ways of closing a one-crossing diagram give opposite kinks
    assert make_pd([[1, 2, 2, 1]]).signs == (-1,)
    assert make_pd([[1, 1, 2, 2]]).signs == (1,)


@pytest.mark.parametrize("doc, field", [
    ('{"pd": [[1,3,2]]}', "pd"),
    ('{"pd": [[1,2,3,4]]}', "pd"),                      # dangling edges
    ('{"pd": [[1,1,1,1]]}', "pd"),
    ('{"pd": [], "free_loops": -1}', "free_loops"),
    ('{"pd": [[1,3,2,4],[3,1,4,2]], "signs": [1]}', "signs"),
    ('{"free_loops": 1}', "pd"),
    ('not json', "input"),
    ('[1, 2]', "input"),
    ('{"pd": [[1,3,2,4],[3,1,4,2]], "basepoints": {"p": 9, "q": 1}}', "basepoints"),
])
def test_malformed_input_names_field(doc, field):
    with pytest.raises(PDError) as err:
        parse_diagram(doc)
    assert err.value.field == field


def test_inconsistent_orientation():
    # both strands at the second crossing claim the same direction for edge 1
    with pytest.raises(PDError):
        make_pd([[1, 3, 2, 4], [1, 4, 2, 3]])


def test_parse_diagram_round_trip():
    d = parse_diagram({"pd": HOPF, "basepoints": {"p": 1, "q": 3}})
    again = parse_diagram(json.dumps(d.to_json()))
    assert again.pd.crossings == d.pd.crossings and (again.p, again.q) == (1, 3)


def test_braid_closure_labels():
    b = braid_closure([1, 1, 1], 2)
    assert sorted(e for x in b.pd.crossings for e in x) == sorted(list(range(1, 7)) * 2)
    # labels increase along each component
    for comp in b.pd.components:
        k = comp.index(min(comp))
        assert list(comp[k:] + comp[:k]) == sorted(comp)
    assert b.pd.signs == (1, 1, 1)
    assert braid_closure([-1, -1, -1], 2).pd.signs == (-1, -1, -1)
    b = braid_closure([1], 3)
    assert b.pd.free_loops == 1 and len(b.pd.components) == 2


def test_disjoint_union_edges():
    a, b = make_pd(HOPF), make_pd([], 1)
    pd, ma, mb = disjoint_union(a, b)
    assert pd.n_edges == 5 and pd.free_loops == 1
    assert mb[1] == 5 and ma[4] == 4
