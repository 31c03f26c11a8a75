from hsgkit.tower import J_RELATIVE, build_numeric_tower, completion_descriptor, tower_to_dict


def test_shape():
    t = build_numeric_tower()
    assert len(t.nodes) == 7 and len(t.edges) == 6
    assert [(e.source, e.target) for e in t.edges] == [(i, i + 1) for i in range(6)]


def test_edge_kinds_and_witnesses():
    t = build_numeric_tower()
    assert t.edge(0).kind == J_RELATIVE
    last = t.edge(5)
    assert last.symbolic and last.witness is None
    assert all(e.verified for e in t.edges[:5])


def test_report_only_flags_symbolic_edge():
    r = build_numeric_tower().report()
    assert r.ok
    assert [f.location for f in r.findings if f.code == "symbolic"] == [(5, 6)]


def test_completion_descriptor():
    d = completion_descriptor()
    assert d.idempotent and not d.numeric and d.level == 6


def test_dict_is_stable():
    assert tower_to_dict(build_numeric_tower()) == tower_to_dict(build_numeric_tower())
