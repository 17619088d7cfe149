import pytest

from orgatlas import model, snapshot
from orgatlas.errors import DanglingEndpoint, InvalidEntity, KindMismatch, SelfLoop, UnknownEntity
from orgatlas.model import EntityId, Graph, LinkRecord, Staff, Unit


def test_add_entity_base_case():
    g = model.add_entity(Graph(), Staff(id=EntityId("staff", "s1"), full_name="Ada Lovelace"))
    assert len(g.entities) == 1


def test_add_entity_last_write_wins():
    g = model.add_entity(Graph(), Staff(id=EntityId("staff", "s1"), full_name="First"))
    g = model.add_entity(g, Staff(id=EntityId("staff", "s1"), full_name="Second"))
    assert len(g.entities) == 1
    assert g.entities[EntityId("staff", "s1")].full_name == "Second"


def test_add_entity_rejects_empty_name():
    with pytest.raises(InvalidEntity) as excinfo:
        model.add_entity(Graph(), Staff(id=EntityId("staff", "s1"), full_name="  "))
    assert "full_name" in str(excinfo.value)


def test_add_entity_does_not_mutate_argument():
    g = Graph()
    model.add_entity(g, Staff(id=EntityId("staff", "s1"), full_name="Ada"))
    assert g.entities == {}


def test_add_link_membership(demo_graph):
    link = LinkRecord("authored", EntityId("staff", "s1"), EntityId("output", "o1"))
    assert link in demo_graph.links


def test_add_link_readd_is_noop(demo_graph):
    link = LinkRecord("authored", EntityId("staff", "s1"), EntityId("output", "o1"))
    again = model.add_link(demo_graph, link)
    assert len(again.links) == len(demo_graph.links)


def test_add_link_kind_mismatch(demo_graph):
    with pytest.raises(KindMismatch):
        model.add_link(demo_graph, LinkRecord("produced_by", EntityId("output", "o1"), EntityId("output", "o1x")))


def test_add_link_dangling(demo_graph):
    with pytest.raises(DanglingEndpoint):
        model.add_link(demo_graph, LinkRecord("authored", EntityId("staff", "s1"), EntityId("output", "ghost")))


def test_add_link_self_loop(demo_graph):
    with pytest.raises(SelfLoop):
        model.add_link(demo_graph, LinkRecord("related_to", EntityId("project", "p1"), EntityId("project", "p1")))


def test_validate_demo_graph_clean(demo_graph):
    assert model.validate_graph(demo_graph) == []


def test_validate_self_parent_unit():
    g = model.add_entity(Graph(), Unit(id=EntityId("unit", "u2"), name="Loop", parent=EntityId("unit", "u2")))
    codes = [v.code for v in model.validate_graph(g)]
    assert "CycleCreated" in codes


def test_validate_dangling_link(demo_graph):
    from dataclasses import replace

    ghost = LinkRecord("produced_by", EntityId("output", "o1"), EntityId("project", "ghost"))
    broken = replace(demo_graph, links=demo_graph.links | {ghost})
    codes = [v.code for v in model.validate_graph(broken)]
    assert "DanglingEndpoint" in codes


def test_validate_two_node_parent_cycle():
    g = Graph()
    g = model.add_entity(g, Unit(id=EntityId("unit", "a"), name="A"))
    g = model.add_entity(g, Unit(id=EntityId("unit", "b"), name="B", parent=EntityId("unit", "a")))
    from dataclasses import replace as dreplace

    entities = dict(g.entities)
    entities[EntityId("unit", "a")] = Unit(id=EntityId("unit", "a"), name="A", parent=EntityId("unit", "b"))
    g = dreplace(g, entities=entities)
    violations = model.validate_graph(g)
    assert sorted(v.subject for v in violations if v.code == "CycleCreated") == ["unit:a", "unit:b"]


def test_neighbors(demo_graph):
    assert model.neighbors(demo_graph, EntityId("staff", "s1"), "authored", "outgoing") == [EntityId("output", "o1")]
    assert model.neighbors(demo_graph, EntityId("staff", "s2"), "authored", "outgoing") == []
    assert model.neighbors(demo_graph, EntityId("project", "p1"), "produced_by", "incoming") == [EntityId("output", "o1")]


def test_neighbors_unknown_entity(demo_graph):
    with pytest.raises(UnknownEntity):
        model.neighbors(demo_graph, EntityId("staff", "ghost"), "authored", "outgoing")


def test_entity_view_project(demo_graph):
    view = model.entity_view(demo_graph, EntityId("project", "p1"))
    panels = view.neighbor_panels
    assert [m["id"] for m in panels["contributes_to:incoming"]] == ["staff:s1"]
    assert [m["id"] for m in panels["produced_by:incoming"]] == ["output:o1"]
    assert [m["id"] for m in panels["tasked_to:outgoing"]] == ["unit:u2"]
    assert [m["id"] for m in panels["tagged:outgoing"]] == ["theme:t_radar"]
    assert panels["related_to:outgoing"] == []
    assert panels["related_to:incoming"] == []


def test_entity_view_isolated_theme(demo_graph):
    view = model.entity_view(demo_graph, EntityId("theme", "t_maritime"))
    assert all(members == [] for members in view.neighbor_panels.values())


def test_entity_view_unknown(demo_graph):
    with pytest.raises(UnknownEntity):
        model.entity_view(demo_graph, EntityId("project", "ghost"))


def test_panel_links_bijection(demo_graph):
    triples = set()
    for eid in demo_graph.entities:
        view = model.entity_view(demo_graph, eid)
        for key, members in view.neighbor_panels.items():
            link_type, direction = key.split(":")
            for m in members:
                other = EntityId.parse(m["id"])
                if direction == "outgoing":
                    triples.add((link_type, eid, other))
                else:
                    triples.add((link_type, other, eid))
    assert triples == {(l.link_type, l.from_id, l.to_id) for l in demo_graph.links}


def test_snapshot_roundtrip_and_determinism(demo_graph):
    data = snapshot.snapshot_bytes(demo_graph)
    assert data == snapshot.snapshot_bytes(demo_graph)
    parsed = snapshot.parse_snapshot(data)
    assert snapshot.snapshot_bytes(parsed) == data
    assert parsed.entities == demo_graph.entities
    assert parsed.links == demo_graph.links


def test_snapshot_layout(demo_graph):
    lines = snapshot.snapshot_bytes(demo_graph).decode().splitlines()
    import json

    assert json.loads(lines[0]) == {"record": "header", "schema_version": 1}
    kinds = [json.loads(l)["record"] for l in lines[1:]]
    assert kinds == ["entity"] * len(demo_graph.entities) + ["link"] * len(demo_graph.links)
    entity_ids = [json.loads(l)["id"] for l in lines[1:1 + len(demo_graph.entities)]]
    assert entity_ids == sorted(entity_ids)
