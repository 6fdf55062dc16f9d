"""Shared instance generators and independent oracles.

The oracles recompute everything from raw numpy primitives (explicit loops,
inline projections) so they stay independent of the library code paths they
are used to check.
"""

from __future__ import annotations

import numpy as np

from gfusion import ControlledFamily, MeasureAtom, Subspace, optimal_bounds


# ---------------------------------------------------------------- generators

def diag_control(rng, n, lo=0.5, hi=2.0):
    return np.diag(rng.uniform(lo, hi, n))


def coordinate_atom(rng, n, i, tag="a"):
    """A diagonal atom covering coordinate ``i mod n`` plus random extras."""
    axes = {int(i % n)}
    axes.update(int(j) for j in rng.integers(0, n, size=rng.integers(0, 3)))
    axes = sorted(axes)
    local = np.zeros((len(axes), n))
    for row, j in enumerate(axes):
        local[row, j] = rng.uniform(0.3, 1.6)
    return MeasureAtom(
        id=f"{tag}{i}",
        weight=float(rng.uniform(0.5, 2.5)),
        frame_weight=float(rng.uniform(0.4, 1.8)),
        subspace=Subspace.coordinate(n, axes),
        local_op=local,
    )


def random_atom(rng, n, i, tag="a"):
    """A dense atom: random subspace, random complex local operator."""
    r = int(rng.integers(1, n + 1))
    d = int(rng.integers(1, n + 2))
    basis = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    local = (rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))) / np.sqrt(n)
    return MeasureAtom(
        id=f"{tag}{i}",
        weight=float(rng.uniform(0.5, 2.5)),
        frame_weight=float(rng.uniform(0.4, 1.8)),
        subspace=Subspace.from_vectors(basis.T),
        local_op=local,
    )


def diag_family(seed, n=None, n_atoms=None, equal_controls=False):
    """Fully diagonal instance: everything commutes, always a frame."""
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(2, 17))
    n_atoms = n_atoms or int(rng.integers(n, 21))
    atoms = tuple(coordinate_atom(rng, n, i) for i in range(n_atoms))
    t = diag_control(rng, n)
    u = t if equal_controls else diag_control(rng, n)
    return ControlledFamily(n, atoms, t, u)


def generic_family(seed, n=None, n_atoms=None):
    """Random subspaces and local operators under one repeated diagonal control.

    Redraws until the instance is a frame (the atoms almost surely span, but
    the lower bound can still be poor).
    """
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(2, 17))
    n_atoms = n_atoms or int(rng.integers(max(2, n), 21))
    for _ in range(50):
        atoms = tuple(random_atom(rng, n, i) for i in range(n_atoms))
        t = diag_control(rng, n)
        fam = ControlledFamily(n, atoms, t, t)
        if optimal_bounds(fam).A_opt > 1e-6:
            return fam
    raise RuntimeError(f"could not draw a frame instance for seed {seed}")


def scale_local_ops(family, factor):
    """Same family with every local operator multiplied by ``factor``."""
    atoms = tuple(
        MeasureAtom(
            id=a.id,
            weight=a.weight,
            frame_weight=a.frame_weight,
            subspace=a.subspace,
            local_op=factor * a.local_op,
        )
        for a in family.atoms
    )
    return ControlledFamily(family.dim, atoms, family.control_left, family.control_right)


def unit_vectors(rng, n, count):
    z = rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))
    return z / np.linalg.norm(z, axis=0, keepdims=True)


def random_pair(seed, n=5, n_atoms=8):
    """Two atom-aligned diagonal families under distinct repeated controls."""
    from gfusion import BesselPair

    lam = diag_family(seed, n=n, n_atoms=n_atoms, equal_controls=True)
    rng = np.random.default_rng(10_000 + seed)
    atoms = []
    for a in lam.atoms:  # same measure weights and codomains, fresh structure
        d = a.codomain_dim
        local = np.zeros((d, n))
        rows = [int(rng.integers(0, n)) for _ in range(d)]
        for row, j in enumerate(rows):
            local[row, j] = rng.uniform(0.3, 1.6)
        atoms.append(
            MeasureAtom(
                a.id, a.weight, float(rng.uniform(0.4, 1.8)),
                Subspace.coordinate(n, sorted(set(rows))), local,
            )
        )
    u = np.diag(rng.uniform(0.5, 2.0, n))
    gam = ControlledFamily(n, tuple(atoms), u, u)
    return BesselPair(lam, gam)


# ------------------------------------------------------------------- oracles

def oracle_projection(atom):
    b = atom.subspace.basis
    return b @ b.conj().T


def oracle_atom_term(family, atom):
    p = oracle_projection(atom)
    core = p @ atom.local_op.conj().T @ atom.local_op @ p
    return family.control_left.conj().T @ core @ family.control_right


def oracle_frame_operator(family):
    """Direct summation, one explicit term per atom."""
    s = np.zeros((family.dim, family.dim), dtype=complex)
    for atom in family.atoms:
        s = s + atom.weight * atom.frame_weight**2 * oracle_atom_term(family, atom)
    return s


def oracle_plain_operator(family):
    s = np.zeros((family.dim, family.dim), dtype=complex)
    for atom in family.atoms:
        p = oracle_projection(atom)
        s = s + atom.weight * atom.frame_weight**2 * (p @ atom.local_op.conj().T @ atom.local_op @ p)
    return s


def oracle_gram(family, f, g):
    """Per-atom inner products, never through the frame operator."""
    f = np.asarray(f, dtype=complex).reshape(-1)
    g = np.asarray(g, dtype=complex).reshape(-1)
    total = 0j
    for atom in family.atoms:
        p = oracle_projection(atom)
        x = atom.local_op @ p @ family.control_right @ f
        y = atom.local_op @ p @ family.control_left @ g
        total += atom.weight * atom.frame_weight**2 * np.sum(x * y.conj())
    return total
