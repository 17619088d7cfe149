"""Seeded synthetic organisation used by the acceptance suite."""

import os
import random

from orgatlas import model
from orgatlas.model import (
    Document,
    EntityId,
    Graph,
    LinkRecord,
    Output,
    Project,
    Staff,
    Theme,
    Unit,
)

VOCABULARY = [
    "radar", "sonar", "lidar", "imaging", "aperture", "synthetic", "signal",
    "processing", "maritime", "airborne", "satellite", "fusion", "tracking",
    "classification", "detection", "clutter", "doppler", "array", "antenna",
    "waveform", "spectrum", "jamming", "stealth", "acoustic", "optical",
    "infrared", "surveillance", "reconnaissance", "navigation", "guidance",
    "autonomy", "swarm", "network", "cyber", "crypto", "protocol", "latency",
    "bandwidth", "simulation", "model", "terrain", "weather", "ocean",
    "littoral", "platform", "payload", "sensor", "calibration", "telemetry",
    "propulsion", "materials", "composite", "fatigue", "corrosion", "armour",
    "ballistics", "explosive", "logistics", "supply", "human", "factors",
    "decision", "support", "planning", "optimisation", "scheduling", "risk",
    "assessment", "evaluation", "trial", "experiment", "analysis", "algorithm",
    "learning", "inference", "estimation", "filtering", "kalman", "bayesian",
]

FIRST_NAMES = ["alice", "bruce", "carol", "david", "erin", "frank", "grace",
               "henry", "iris", "jack", "kate", "liam", "mona", "ning", "omar",
               "priya", "quinn", "rosa", "sam", "tina"]
LAST_NAMES = ["anderson", "baker", "chen", "dawson", "evans", "foster", "gupta",
              "harris", "ito", "jones", "kumar", "lee", "moreno", "nguyen",
              "olsen", "patel", "quirk", "rossi", "singh", "taylor"]

SITES = ["Site A", "Site B", "Site C"]


def _sentence(rng, length):
    return " ".join(rng.choice(VOCABULARY) for _ in range(length))


def build_synthetic_org(corpus_root, seed=42):
    """50 staff, 20 projects, 80 outputs, 8 units, 25 themes, ~400 links,
    ~200 attached text documents under corpus_root."""
    rng = random.Random(seed)
    os.makedirs(os.path.join(corpus_root, "docs"), exist_ok=True)
    g = Graph()

    staff_ids = []
    for i in range(1, 51):
        sid = EntityId("staff", f"s{i}")
        staff_ids.append(sid)
        g = model.add_entity(g, Staff(
            id=sid,
            full_name=f"{rng.choice(FIRST_NAMES).title()} {rng.choice(LAST_NAMES).title()} {i}",
            email=f"person{i}@example.org",
            site=rng.choice(SITES),
            bio=_sentence(rng, rng.randint(5, 20)) if rng.random() < 0.7 else None,
            interests=_sentence(rng, rng.randint(3, 10)) if rng.random() < 0.5 else None,
        ))

    unit_ids = []
    for i in range(1, 9):
        uid = EntityId("unit", f"u{i}")
        parent = rng.choice(unit_ids) if unit_ids and i > 2 else None
        unit_ids.append(uid)
        g = model.add_entity(g, Unit(
            id=uid,
            name=f"Unit {_sentence(rng, 1).title()} {i}",
            parent=parent,
            head=rng.choice(staff_ids) if rng.random() < 0.8 else None,
        ))

    theme_ids = []
    for i in range(1, 26):
        tid = EntityId("theme", f"t{i}")
        facet = "science_tech" if i <= 15 else "client"
        same_facet = [t for t in theme_ids if g.entities[t].facet == facet]
        parent = rng.choice(same_facet) if same_facet and rng.random() < 0.7 else None
        g = model.add_entity(g, Theme(
            id=tid,
            label=f"{_sentence(rng, 1).title()} Area {i}",
            facet=facet,
            parent=parent,
        ))
        theme_ids.append(tid)

    project_ids = []
    for i in range(1, 21):
        pid = EntityId("project", f"p{i}")
        project_ids.append(pid)
        g = model.add_entity(g, Project(
            id=pid,
            title=f"Project {_sentence(rng, 2).title()} {i}",
            abstract_text=_sentence(rng, rng.randint(10, 30)),
            overview=_sentence(rng, rng.randint(5, 15)) if rng.random() < 0.5 else None,
            status=rng.choice(["planned", "active", "completed"]),
        ))

    doc_counter = 0
    output_ids = []
    for i in range(1, 81):
        oid = EntityId("output", f"o{i}")
        output_ids.append(oid)
        documents = []
        for _ in range(rng.randint(2, 3)):
            doc_counter += 1
            rel = f"docs/doc{doc_counter}.txt"
            with open(os.path.join(corpus_root, rel), "w", encoding="utf-8") as fh:
                fh.write(_sentence(rng, rng.randint(20, 80)))
            documents.append(Document(path=rel, media_type="text/plain"))
        g = model.add_entity(g, Output(
            id=oid,
            title=f"Output {_sentence(rng, 2).title()} {i}",
            abstract_text=_sentence(rng, rng.randint(5, 25)) if rng.random() < 0.8 else None,
            year=rng.randint(1998, 2006),
            doc_type=rng.choice(["report", "paper", "presentation", "design", "dataset", "other"]),
            documents=tuple(documents),
        ))

    links = set()
    for sid in staff_ids:
        for uid in rng.sample(unit_ids, rng.randint(1, 2)):
            links.add(LinkRecord("member_of", sid, uid))
    for pid in project_ids:
        links.add(LinkRecord("tasked_to", pid, rng.choice(unit_ids)))
        for sid in rng.sample(staff_ids, rng.randint(2, 4)):
            links.add(LinkRecord("contributes_to", sid, pid))
        for tid in rng.sample(theme_ids, rng.randint(1, 3)):
            links.add(LinkRecord("tagged", pid, tid))
        if rng.random() < 0.4:
            other = rng.choice(project_ids)
            if other != pid:
                links.add(LinkRecord("related_to", pid, other))
    for oid in output_ids:
        for sid in rng.sample(staff_ids, rng.randint(1, 3)):
            links.add(LinkRecord("authored", sid, oid))
        if rng.random() < 0.9:
            links.add(LinkRecord("produced_by", oid, rng.choice(project_ids)))
        for tid in rng.sample(theme_ids, rng.randint(0, 2)):
            links.add(LinkRecord("tagged", oid, tid))
    for sid in rng.sample(staff_ids, 15):
        links.add(LinkRecord("tagged", sid, rng.choice(theme_ids)))

    for link in sorted(links, key=lambda l: (l.link_type, l.from_id, l.to_id)):
        g = model.add_link(g, link)
    return g
