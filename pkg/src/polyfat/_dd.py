"""Double description method for pointed polyhedral cones, in integers.

The cone is ``{x : r . x >= 0 for every row r}``.  Zero sets are stored as
Python ints used as bitsets over row indices.
"""

from ._linalg import clear_denominators, dot, nullspace, primitive, row_reduce


def _popcount(x):
    return bin(x).count("1")


def _independent_rows(rows, dim):
    chosen = []
    for i, r in enumerate(rows):
        trial = [rows[j] for j in chosen] + [r]
        if len(row_reduce(trial, dim)[1]) == len(trial):
            chosen.append(i)
            if len(chosen) == dim:
                break
    return chosen


def extreme_rays(rows, dim):
    """Extreme rays of a polyhedral cone.

    Parameters
    ----------
    rows : sequence of integer or rational vectors of length ``dim``
    dim : int

    Returns
    -------
    rays : list of (tuple of int, int)
        Primitive integer ray and the bitset of rows it makes tight.  ``None``
        if the cone contains a line.
    lineality : tuple or None
        A vector of the lineality space when the cone is not pointed.
    """
    rows = [clear_denominators(r) for r in rows]
    basis = _independent_rows(rows, dim)
    if len(basis) < dim:
        lin = nullspace(rows, dim)[0] if rows else tuple(int(i == 0) for i in range(dim))
        return None, tuple(lin)

    # initial simplicial cone: columns of B^{-1}
    B = [rows[i] for i in basis]
    rays = []
    for j in range(dim):
        aug = [list(B[i]) + [int(i == j)] for i in range(dim)]
        R, _ = row_reduce(aug, dim + 1)
        x = tuple(R[i][dim] for i in range(dim))
        v = clear_denominators(x)
        z = 0
        for k, i in enumerate(basis):
            if k != j:
                z |= 1 << i
        rays.append((v, z))

    in_basis = set(basis)
    for idx, a in enumerate(rows):
        if idx in in_basis:
            continue
        pos, neg, zero = [], [], []
        for v, z in rays:
            s = dot(a, v)
            if s > 0:
                pos.append((v, z, s))
            elif s < 0:
                neg.append((v, z, s))
            else:
                zero.append((v, z | (1 << idx)))
        if not neg:
            rays = [(v, z) for v, z, _ in pos] + zero
            continue
        new = []
        all_z = [z for _, z in rays]
        for vp, zp, sp in pos:
            for vn, zn, sn in neg:
                Z = zp & zn
                if _popcount(Z) < dim - 2:
                    continue
                adjacent = True
                for zr in all_z:
                    if zr != zp and zr != zn and (Z & zr) == Z:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                w = primitive(tuple(sp * x - sn * y for x, y in zip(vn, vp)))
                new.append((w, Z | (1 << idx)))
        rays = [(v, z) for v, z, _ in pos] + zero + new

    # recompute full zero sets and normalize order
    out = []
    for v, _ in rays:
        z = 0
        for i, r in enumerate(rows):
            if dot(r, v) == 0:
                z |= 1 << i
        out.append((v, z))
    out.sort()
    return out, None
