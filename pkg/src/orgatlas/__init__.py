"""orgatlas: organisational knowledge and expertise finder.

Ingests heterogeneous source snapshots into a canonical five-entity graph
(staff, projects, outputs, units, themes), serves interlinked entity views
and hybrid Boolean/free-text/taxonomy search, and derives staff expertise
profiles from the graph.
"""

__version__ = "0.1.0"
