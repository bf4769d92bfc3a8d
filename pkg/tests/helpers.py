"""Shared test utilities: paper matrices written out independently, and
random diagram generators for the property corpora."""

from __future__ import annotations

import numpy as np

from zxel import diagram as D

# the generator matrices, transcribed directly (the tests' ground truth,
# independent of zxel.semantics internals)
H_MAT = np.array([[1, 1], [1, -1]], dtype=complex)
T_MAT = np.array([[1, 1], [0, 1]], dtype=complex)
T_INV_MAT = np.array([[1, -1], [0, 1]], dtype=complex)
X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)
SWAP_MAT = np.array([[1, 0, 0, 0], [0, 0, 1, 0],
                     [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
CAP_VEC = np.array([[1], [0], [0], [1]], dtype=complex)
CUP_VEC = np.array([[1, 0, 0, 1]], dtype=complex)


def z_mat(n: int, m: int, a: complex) -> np.ndarray:
    """|0..0><0..0| + a |1..1><1..1| of shape 2^m x 2^n."""
    out = np.zeros((2 ** m, 2 ** n), dtype=complex)
    out[0, 0] = 1.0
    out[-1, -1] += a
    return out


def parity_mat(n: int, m: int, tau_is_pi: bool) -> np.ndarray:
    """The parity-sum tensor: entry 1 iff output bits + input bits have
    the stated parity."""
    want = 1 if tau_is_pi else 0
    out = np.zeros((2 ** m, 2 ** n), dtype=complex)
    for r in range(2 ** m):
        for c in range(2 ** n):
            if (bin(r).count("1") + bin(c).count("1")) % 2 == want:
                out[r, c] = 1.0
    return out


def row_addition_matrix(m: int, a: complex, subset) -> np.ndarray:
    """The row-addition elementary matrix, straight from its definition."""
    n = 2 ** m
    j = n - 1 - sum(2 ** i for i in subset)
    out = np.eye(n, dtype=complex)
    out[j, n - 1] += a
    return out


def row_multiplication_matrix(m: int, a: complex) -> np.ndarray:
    out = np.eye(2 ** m, dtype=complex)
    out[-1, -1] = a
    return out


def random_complex(rng, radius: float = 2.0) -> complex:
    r = radius * np.sqrt(rng.uniform())
    th = rng.uniform(0, 2 * np.pi)
    return complex(r * np.cos(th), r * np.sin(th))


def random_diagram(rng, max_wires: int = 3, max_gens: int = 8) -> D.Diagram:
    """A random small diagram built from at most max_gens generator
    applications on at most max_wires parallel wires."""
    w = int(rng.integers(1, max_wires + 1))
    d = D.identity(w)
    for _ in range(int(rng.integers(1, max_gens + 1))):
        w = d.n_out
        pick = int(rng.integers(0, 10))
        if pick == 0 and w >= 2:
            layer = D.tensor(D.identity(w - 2),
                             D.z_spider(2, 1, random_complex(rng)))
        elif pick == 1 and w < max_wires:
            layer = D.tensor(D.identity(w - 1),
                             D.z_spider(1, 2, random_complex(rng)))
        elif pick == 2 and w >= 2:
            layer = D.tensor(D.identity(w - 2), D.x_spider(2, 1, D.TAU_ZERO))
        elif pick == 3:
            layer = D.tensor(D.identity(w - 1), D.h_box())
        elif pick == 4:
            layer = D.tensor(D.identity(w - 1), D.triangle())
        elif pick == 5:
            layer = D.tensor(D.identity(w - 1), D.triangle_inv())
        elif pick == 6:
            layer = D.tensor(D.identity(w - 1), D.x_spider(1, 1, D.TAU_PI))
        elif pick == 7 and w >= 2:
            layer = D.tensor(D.identity(w - 2), D.swap())
        elif pick == 8 and w >= 2:
            layer = D.tensor(D.identity(w - 2), D.cup())
        else:
            layer = D.tensor(D.identity(w - 1),
                             D.z_spider(1, 1, random_complex(rng)))
        if layer.n_in != d.n_out or layer.n_out == 0:
            continue
        d = D.compose(d, layer)
    return d
