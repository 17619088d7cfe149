import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from orgatlas import model
from orgatlas.model import (
    Document,
    EntityId,
    Graph,
    LinkRecord,
    Milestone,
    Output,
    Project,
    Staff,
    Theme,
    Unit,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def build_demo_graph():
    """Small organisation used throughout: 2 staff, 1 project, 1 output,
    2 units, 4 themes (10 entities)."""
    g = Graph()
    for entity in [
        Staff(
            id=EntityId("staff", "s1"),
            full_name="Ada Lovelace",
            email="ada@example.org",
            site="Site A",
            bio="Researcher in radar signal processing",
            interests="synthetic aperture radar imaging",
        ),
        Staff(id=EntityId("staff", "s2"), full_name="Alan Turing", site="Site B"),
        Project(
            id=EntityId("project", "p1"),
            title="Maritime Radar Surveillance",
            abstract_text="Radar surveillance techniques for maritime patrol",
            status="active",
            milestones=(Milestone(name="kickoff", date="2004-02-01"),),
            deliverables=("Final report",),
        ),
        Output(
            id=EntityId("output", "o1"),
            title="Synthetic Aperture Radar Study",
            venue="Internal report series",
            year=2004,
            doc_type="report",
            documents=(Document(path="docs/o1.txt", media_type="text/plain"),),
        ),
        Unit(id=EntityId("unit", "u1"), name="Division A", admin_contacts=("frontdesk@example.org",)),
        Unit(
            id=EntityId("unit", "u2"),
            name="Radar Systems Group",
            parent=EntityId("unit", "u1"),
            head=EntityId("staff", "s1"),
        ),
        Theme(id=EntityId("theme", "t_st"), label="ST", facet="science_tech"),
        Theme(
            id=EntityId("theme", "t_sensors"),
            label="Sensors",
            facet="science_tech",
            parent=EntityId("theme", "t_st"),
        ),
        Theme(
            id=EntityId("theme", "t_radar"),
            label="Radar",
            facet="science_tech",
            parent=EntityId("theme", "t_sensors"),
        ),
        Theme(id=EntityId("theme", "t_maritime"), label="Maritime Operations", facet="client"),
    ]:
        g = model.add_entity(g, entity)
    for link_type, from_id, to_id in [
        ("contributes_to", "staff:s1", "project:p1"),
        ("authored", "staff:s1", "output:o1"),
        ("produced_by", "output:o1", "project:p1"),
        ("member_of", "staff:s1", "unit:u2"),
        ("member_of", "staff:s2", "unit:u1"),
        ("tasked_to", "project:p1", "unit:u2"),
        ("tagged", "project:p1", "theme:t_radar"),
        ("tagged", "output:o1", "theme:t_radar"),
    ]:
        g = model.add_link(g, LinkRecord(link_type, EntityId.parse(from_id), EntityId.parse(to_id)))
    return g


@pytest.fixture(scope="session")
def demo_graph():
    return build_demo_graph()


@pytest.fixture(scope="session")
def demo_corpus():
    return os.path.join(FIXTURES, "demo_corpus")


@pytest.fixture(scope="session")
def demo_bundle():
    return os.path.join(FIXTURES, "demo_bundle")


@pytest.fixture(scope="session")
def demo_index(demo_graph, demo_corpus):
    from orgatlas import searchindex

    return searchindex.build_index(demo_graph, demo_corpus)
