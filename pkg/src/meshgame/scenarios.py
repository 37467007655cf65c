"""Built-in test scenarios: triangle fans around an off-center hub.

Each scenario is an n-gon of unit circumradius triangulated from a hub
vertex. The hub sits at (0.3, 0.2) rather than the polygon center, so the
initial mesh is deliberately irregular. Perturbed variants additionally
jitter the ring vertices with a seeded generator, which makes them
reproducible instance families rather than single meshes.
"""
from __future__ import annotations

import numpy as np

from .mesh import Mesh, build_mesh

#: Hub offset that de-regularizes every fan.
HUB = (0.3, 0.2)

#: Ring jitter half-width for perturbed scenarios.
JITTER = 0.15

SCENARIO_NAMES = ("fan4", "fan5", "fan5_perturbed", "fan6")

_RING_SIZES = {"fan4": 4, "fan5": 5, "fan5_perturbed": 5, "fan6": 6}


def _fan(n_ring: int, jitter: bool, seed: int) -> Mesh:
    angles = 2.0 * np.pi * np.arange(n_ring) / n_ring
    ring = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if jitter:
        rng = np.random.default_rng(seed)
        ring = ring + rng.uniform(-JITTER, JITTER, size=(n_ring, 2))
    vertices = np.vstack([np.array([HUB]), ring])
    elements = np.array(
        [[0, 1 + i, 1 + (i + 1) % n_ring] for i in range(n_ring)], dtype=np.int64
    )
    return build_mesh(vertices, elements)


def generate_scenario(name: str, seed: int = 0) -> Mesh:
    """Build a named scenario mesh; the seed only matters for *_perturbed."""
    if name not in _RING_SIZES:
        raise ValueError(f"unknown scenario {name!r} (known: {SCENARIO_NAMES})")
    return _fan(_RING_SIZES[name], name.endswith("_perturbed"), seed)
