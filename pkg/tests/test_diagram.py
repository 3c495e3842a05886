import pytest

from conftest import FIG8_PD, NONALT_PD, SIX_PD, TREFOIL_KINK_PD, TREFOIL_PD
from octa_ptolemy.diagram import (
    DiagramError,
    build_regions,
    local_frames,
    parse_pd,
    segment_case,
    to_pd,
    under_pass_order,
)

ALL = [FIG8_PD, TREFOIL_KINK_PD, TREFOIL_PD, SIX_PD, NONALT_PD, "X[1,2,2,1]"]


@pytest.mark.parametrize("pd", ALL)
def test_euler_counts(pd):
    d = parse_pd(pd)
    assert len(d.segments) == 2 * d.n
    assert len(d.regions) == d.n + 2
    assert d.writhe == sum(c.sign for c in d.crossings)


@pytest.mark.parametrize("pd", ALL)
def test_every_segment_borders_two_regions_and_corners(pd):
    d = parse_pd(pd)
    for s in d.segments.values():
        assert s.left_region != s.right_region
    corners = [c for r in d.regions for c in r.corners]
    assert sorted(corners) == sorted((i, p) for i in range(d.n) for p in range(4))


def test_writhes_of_worked_examples():
    assert parse_pd(FIG8_PD).writhe == 0
    assert parse_pd(TREFOIL_KINK_PD).writhe == 2


def test_region_counts():
    assert len(build_regions(parse_pd(TREFOIL_KINK_PD))) == 6
    assert len(build_regions(parse_pd(FIG8_PD))) == 6
    assert len(build_regions(parse_pd("X[1,2,2,1]"))) == 3


def test_crossing_strands_consecutive():
    d = parse_pd(SIX_PD)
    for c in d.crossings:
        assert d.next_label(c.under_in) == c.under_out
        assert d.next_label(c.over_in) == c.over_out


@pytest.mark.parametrize("pd", ALL)
def test_under_pass_order_is_permutation(pd):
    d = parse_pd(pd)
    order, arcs = under_pass_order(d)
    assert sorted(order) == list(range(d.n))
    assert sorted(lab for arc in arcs for lab in arc) == sorted(d.segments)
    # arcs[i] leaves c_{i+1} and ends under c_{i+2}
    for i, arc in enumerate(arcs):
        assert d.segments[arc[0]].tail == order[i]
        assert d.segments[arc[-1]].head == order[(i + 1) % d.n]
        assert d.segments[arc[-1]].head_role == "under"


def test_default_base_is_first_under_pass_of_segment_1():
    d = parse_pd(FIG8_PD)
    order, arcs = under_pass_order(d)
    assert d.crossings[order[0]].under_in == 1


def test_trefoil_kink_signs_in_order():
    d = parse_pd(TREFOIL_KINK_PD)
    order, _ = under_pass_order(d)
    assert [d.crossings[i].sign for i in order] == [1, 1, -1, 1]


def test_rotated_base_gives_cyclic_shift():
    d = parse_pd(SIX_PD)
    order, arcs = under_pass_order(d)
    order2, arcs2 = under_pass_order(d, order[1])
    assert order2 == order[1:] + order[:1]
    assert arcs2 == arcs[1:] + arcs[:1]


@pytest.mark.parametrize("pd", ALL)
def test_round_trip(pd):
    d = parse_pd(pd)
    e = parse_pd(to_pd(d))
    assert [c.labels for c in e.crossings] == [c.labels for c in d.crossings]
    assert [c.sign for c in e.crossings] == [c.sign for c in d.crossings]
    assert [(r.id, r.corners) for r in e.regions] == [(r.id, r.corners) for r in d.regions]


@pytest.mark.parametrize(
    "pd",
    [
        "garbage",
        "X[1,2,3]",
        "X[1,2,3,4]",
        "X[1,5,2,4]; X[3,1,4,6]",
        "X[1,3,2,4]; X[3,1,4,2]; X[5,7,6,8]; X[7,5,8,6]",
        "X[1,5,2,4]; X[3,1,4,6]; X[5,3,6,2]; X[7,9,8,10]; X[9,7,10,8]",
    ],
)
def test_rejects_invalid(pd):
    with pytest.raises(DiagramError):
        parse_pd(pd)


def test_z_frames_are_incident_segments():
    d = parse_pd(SIX_PD)
    for f, c in zip(local_frames(d, "z"), d.crossings):
        assert sorted(f.ids.values()) == sorted(c.labels)
        # a, c on the under-strand; b, d on the over-strand
        assert (f.ids["a"], f.ids["c"]) == (c.under_in, c.under_out)
        assert {f.ids["b"], f.ids["d"]} == {c.over_in, c.over_out}


def test_w_frames_are_corners():
    d = parse_pd(FIG8_PD)
    for f in local_frames(d, "w"):
        assert sorted(f.ids.values()) == sorted(d.region_at(f.crossing, s) for s in range(4))
        assert not f.kink


def test_kink_frame_flagged():
    d = parse_pd(TREFOIL_KINK_PD)
    frames = local_frames(d, "w")
    kinked = [f for f in frames if f.kink]
    assert len(kinked) == 1
    assert len(set(kinked[0].ids.values())) == 3


def test_segment_cases_exhaustive():
    d = parse_pd(NONALT_PD)
    cases = {segment_case(s) for s in d.segments.values()}
    assert cases <= set("abcd")
    # a non-alternating diagram has over/over and under/under segments
    assert {"c", "d"} <= cases
    alt = parse_pd(FIG8_PD)
    assert {segment_case(s) for s in alt.segments.values()} <= {"a", "b"}
