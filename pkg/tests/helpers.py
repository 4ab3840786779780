"""Shared test utilities."""

from fo2words import locality as L
from fo2words import postypes as T


def equivalent_triple_pairs(g, sig, s, rng, want, tries=400):
    """Distinct verified-equivalent triple pairs, found by sampling tightly
    spaced triples and grouping them by their type vector."""
    groups: dict = {}
    out = []
    for _ in range(tries):
        if len(out) >= want:
            break
        t = L.random_extraction_triple(g, s, rng, base_bound=30, jitter=2)
        vec = T.type_vector(g, sig, t, s)
        peers = groups.setdefault(vec, [])
        if t not in peers:
            if peers:
                out.append((peers[0], t))
            peers.append(t)
    return out[:want]
