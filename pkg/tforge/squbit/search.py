"""Meet-in-the-middle search for H/T words.

The database enumerates every distinct matrix reachable by words of at most
``half_depth`` blocks, breadth first so each matrix keeps its shortest word.
Entries are deduplicated on their exact ring representation. A query for U
looks, for every table entry a, for the table entry b nearest to a^dag U; the
word of a followed by the word of b is then a candidate for U.

Two table words cover SU(2) only down to a few 1e-3. Below that the search
corrects the pairs nearest to U: the products x y of table entries lying
within ``refine_radius`` of the identity form a dense cloud around I, and a
pair p = a b is extended to p s (one correction) or p s1 s2 (two) with
corrections s, s1, s2 from that cloud. Each extension is only searched when
the shorter candidates miss the tolerance.
"""

import functools
import itertools
import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from ..config import SynthConfig
from ..errors import PrecisionUnreachableError
from .htword import HTWord, op_norm_2x2
from .ring import canonicalize, omega_mul, to_complex

logger = logging.getLogger(__name__)

# Block codes: 1 = T, 2 = H, 3 = HT.
_BLOCKS = {1: (0, 1), 2: (1, 0), 3: (1, 1)}
_DET_TOL = 1e-10
_BLOCH_DECIMALS = 10
_PRODUCT_DECIMALS = 9
# Table indices per candidate: a pair plus up to two corrections of two entries each.
_PARTS = 6
_CHUNK = 32

Pool = List[Tuple[np.ndarray, np.ndarray]]


def _vec8(m: np.ndarray) -> np.ndarray:
    flat = m.reshape(-1, 4)
    return np.concatenate([flat.real, flat.imag], axis=1)


def _bloch(columns: np.ndarray) -> np.ndarray:
    c0, c1 = columns[:, 0], columns[:, 1]
    cross = np.conj(c0) * c1
    return np.stack([2 * cross.real, 2 * cross.imag, np.abs(c0) ** 2 - np.abs(c1) ** 2], axis=1)


class WordDatabase:
    """Precomputed table of distinct H/T word matrices with nearest-neighbour indexes.

    Attributes:
        coeffs (np.ndarray): Exact entries, shape (N, 4, 4).
        denom (np.ndarray): sqrt(2) denominator exponents, shape (N,).
        parent (np.ndarray): Index of the entry this one extends (-1 for the identity).
        block (np.ndarray): Block code appended to the parent word.
        depth (np.ndarray): Word length in blocks.
        matrices (np.ndarray): Complex matrices, shape (N, 2, 2).
    """

    VERSION = 1

    def __init__(self, coeffs, denom, parent, block, depth):
        self.coeffs = np.asarray(coeffs, dtype=np.int64)
        self.denom = np.asarray(denom, dtype=np.int64)
        self.parent = np.asarray(parent, dtype=np.int64)
        self.block = np.asarray(block, dtype=np.int8)
        self.depth = np.asarray(depth, dtype=np.int64)
        self.matrices = to_complex(self.coeffs, self.denom[:, None]).reshape(-1, 2, 2)
        det = self.matrices[:, 0, 0] * self.matrices[:, 1, 1] - self.matrices[:, 0, 1] * self.matrices[:, 1, 0]
        self.det_class = np.mod(np.rint(np.angle(det) / (np.pi / 4)).astype(np.int64), 8)
        self._class_index = [np.flatnonzero(self.det_class == c) for c in range(8)]
        self._class_trees = [
            cKDTree(_vec8(self.matrices[idx])) if len(idx) else None for idx in self._class_index
        ]
        bloch = np.round(_bloch(self.matrices[:, :, 0]), _BLOCH_DECIMALS)
        _, first = np.unique(bloch, axis=0, return_index=True)
        self._state_index = np.sort(first)
        self._state_tree = cKDTree(bloch[self._state_index])
        self._corrections = None
        logger.debug(f"Word database ready: {len(self)} entries, max depth {self.depth.max()}")

    @classmethod
    def build(cls, half_depth: int = None, max_size: int = None) -> "WordDatabase":
        """Enumerate distinct word matrices breadth first.

        Args:
            half_depth (int, optional): Largest word length in blocks.
            max_size (int, optional): Stop once the table holds this many entries.
        """
        half_depth = SynthConfig.half_depth if half_depth is None else half_depth
        max_size = SynthConfig.table_size if max_size is None else max_size
        identity = np.zeros((1, 4, 4), dtype=np.int64)
        identity[0, 0, 0] = identity[0, 3, 0] = 1
        coeffs = [identity]
        denom = [np.zeros(1, dtype=np.int64)]
        parent = [np.array([-1])]
        block = [np.array([0], dtype=np.int8)]
        depth = [np.array([0])]
        seen = {(0, identity[0].tobytes())}
        frontier = np.array([0])
        frontier_x, frontier_k = identity, np.zeros(1, dtype=np.int64)
        size = 1
        level = 0
        for level in range(1, half_depth + 1):
            new_x, new_k, new_parent, new_block = [], [], [], []
            for code, (a, b) in _BLOCKS.items():
                x, k = _apply_block(frontier_x, frontier_k, a, b)
                for i in range(len(frontier)):
                    key = (int(k[i]), x[i].tobytes())
                    if key in seen:
                        continue
                    seen.add(key)
                    new_x.append(x[i])
                    new_k.append(k[i])
                    new_parent.append(frontier[i])
                    new_block.append(code)
            if not new_x:
                break
            room = max_size - size
            count = min(len(new_x), room)
            frontier_x = np.array(new_x[:count], dtype=np.int64)
            frontier_k = np.array(new_k[:count], dtype=np.int64)
            frontier = np.arange(size, size + count)
            coeffs.append(frontier_x)
            denom.append(frontier_k)
            parent.append(np.array(new_parent[:count]))
            block.append(np.array(new_block[:count], dtype=np.int8))
            depth.append(np.full(count, level))
            size += count
            logger.debug(f"Depth {level}: {count} new entries, {size} total")
            if size >= max_size:
                break
        logger.info(f"Built word database with {size} entries up to depth {level}")
        return cls(
            np.concatenate(coeffs),
            np.concatenate(denom),
            np.concatenate(parent),
            np.concatenate(block),
            np.concatenate(depth),
        )

    def __len__(self) -> int:
        return len(self.denom)

    def word(self, index: int) -> HTWord:
        pairs = []
        while index > 0:
            pairs.append(_BLOCKS[int(self.block[index])])
            index = int(self.parent[index])
        return HTWord(tuple(reversed(pairs)))

    def save(self, path: Union[str, Path]) -> None:
        np.savez_compressed(
            path,
            version=self.VERSION,
            coeffs=self.coeffs,
            denom=self.denom,
            parent=self.parent,
            block=self.block,
            depth=self.depth,
        )
        logger.info(f"Saved word database ({len(self)} entries) to {path}")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "WordDatabase":
        with np.load(path) as data:
            version = int(data["version"])
            if version != cls.VERSION:
                raise ValueError(f"Unsupported word database version {version}")
            return cls(data["coeffs"], data["denom"], data["parent"], data["block"], data["depth"])

    def _candidates(self, parts, errors) -> Tuple[np.ndarray, np.ndarray]:
        """Stack index arrays into rows of ``_PARTS`` entries, padding with the identity (entry 0)."""
        errors = np.asarray(errors, dtype=float)
        columns = [np.asarray(p, dtype=np.int64) for p in parts]
        columns += [np.zeros(len(errors), dtype=np.int64)] * (_PARTS - len(columns))
        return np.stack(columns, axis=1).reshape(-1, _PARTS), errors

    def _feasible(self, pool: Pool, eps: float, max_depth: int) -> bool:
        for idx, errors in pool:
            if np.any((errors <= eps) & (self.depth[idx].sum(axis=1) <= max_depth)):
                return True
        return False

    def _select(self, pool: Pool, eps: float, max_depth: int) -> Tuple[HTWord, float]:
        idx = np.concatenate([p[0] for p in pool])
        errors = np.concatenate([p[1] for p in pool])
        lengths = self.depth[idx].sum(axis=1)
        ok = (errors <= eps) & (lengths <= max_depth)
        if not ok.any():
            best = errors.min() if len(errors) else np.inf
            raise PrecisionUnreachableError(f"precision unreachable: best error {best:.3e} exceeds {eps:.3e}")
        cand = np.flatnonzero(ok)
        keys = tuple(idx[cand, col] for col in reversed(range(_PARTS)))
        order = np.lexsort(keys + (errors[cand], lengths[cand]))
        best = cand[order[0]]
        word = HTWord()
        for entry in idx[best]:
            word = word + self.word(int(entry))
        return word, float(errors[best])

    def pairs_near(self, U: np.ndarray, radius: float):
        """Table pairs (a, b) with ||M_a M_b - U|| <= radius, one pair per distinct product.

        The shortest pair wins among equal products.

        Returns:
            tuple: Arrays ``a``, ``b``, ``errors`` and the products, shape (P, 2, 2).
        """
        U = np.asarray(U, dtype=complex)
        a_all, b_all = [], []
        for ca in range(8):
            a_idx = self._class_index[ca]
            cb = (-ca) % 8
            tree = self._class_trees[cb]
            if len(a_idx) == 0 or tree is None:
                continue
            targets = _adjoint(self.matrices[a_idx]) @ U
            hits = tree.query_ball_point(_vec8(targets), r=np.sqrt(2) * radius)
            counts = np.fromiter((len(h) for h in hits), dtype=np.int64, count=len(hits))
            total = int(counts.sum())
            if total == 0:
                continue
            local = np.fromiter(itertools.chain.from_iterable(hits), dtype=np.int64, count=total)
            a_all.append(np.repeat(a_idx, counts))
            b_all.append(self._class_index[cb][local])
        if not a_all:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0), np.zeros((0, 2, 2), dtype=complex)
        a_idx = np.concatenate(a_all)
        b_idx = np.concatenate(b_all)
        products = self.matrices[a_idx] @ self.matrices[b_idx]
        errors = op_norm_2x2(products - U)
        keep = errors <= radius
        a_idx, b_idx, errors, products = a_idx[keep], b_idx[keep], errors[keep], products[keep]
        order = np.lexsort((errors, self.depth[a_idx] + self.depth[b_idx]))
        _, first = np.unique(np.round(_vec8(products[order]), _PRODUCT_DECIMALS), axis=0, return_index=True)
        chosen = order[np.sort(first)]
        return a_idx[chosen], b_idx[chosen], errors[chosen], products[chosen]

    @property
    def corrections(self) -> "CorrectionSet":
        """Products of table pairs near (but not equal to) the identity, built on first use."""
        radius = SynthConfig.refine_radius
        if self._corrections is None or self._corrections.radius != radius:
            a_idx, b_idx, errors, products = self.pairs_near(np.eye(2), radius)
            keep = errors > 1e-9
            self._corrections = CorrectionSet(a_idx[keep], b_idx[keep], products[keep], radius)
            logger.info(f"Built {len(self._corrections)} corrections within {radius:g} of the identity")
        return self._corrections

    def _pair_pool(self, U: np.ndarray):
        a_all, b_all, err_all = [], [], []
        for ca in range(8):
            a_idx = self._class_index[ca]
            cb = (-ca) % 8
            tree = self._class_trees[cb]
            if len(a_idx) == 0 or tree is None:
                continue
            targets = _adjoint(self.matrices[a_idx]) @ U
            k = min(2, tree.n)
            _, nn = tree.query(_vec8(targets), k=k)
            nn = nn.reshape(len(a_idx), k)
            for col in range(k):
                b_idx = self._class_index[cb][nn[:, col]]
                a_all.append(a_idx)
                b_all.append(b_idx)
                err_all.append(op_norm_2x2(self.matrices[b_idx] - targets))
        return self._candidates([np.concatenate(a_all), np.concatenate(b_all)], np.concatenate(err_all))

    def _corrected_pool(self, U: np.ndarray, prefixes):
        a_idx, b_idx, _, products = prefixes
        fix = self.corrections
        if len(a_idx) == 0 or len(fix) == 0:
            return self._candidates([], [])
        residual = _adjoint(products) @ U
        k = min(2, len(fix))
        _, nn = fix.tree.query(_vec8(residual), k=k)
        nn = nn.reshape(len(a_idx), k)
        parts, errors = [], []
        for col in range(k):
            s = nn[:, col]
            parts.append(np.stack([a_idx, b_idx, fix.a[s], fix.b[s]], axis=1))
            errors.append(op_norm_2x2(fix.matrices[s] - residual))
        return self._candidates(np.concatenate(parts).T, np.concatenate(errors))

    def _twice_corrected_pool(self, U, prefixes, eps, max_depth) -> Pool:
        a_idx, b_idx, prefix_errors, products = prefixes
        fix = self.corrections
        pool = []
        if len(a_idx) == 0 or len(fix) == 0:
            return pool
        ranked = np.argsort(prefix_errors, kind="stable")[: SynthConfig.refine_prefixes]
        fix_adjoint = _adjoint(fix.matrices)
        # Prefixes are scanned best first in chunks; the scan stops after the first chunk with a hit.
        for start in range(0, len(ranked), _CHUNK):
            for p in ranked[start : start + _CHUNK]:
                targets = fix_adjoint @ (products[p].conj().T @ U)
                _, s2 = fix.tree.query(_vec8(targets))
                errors = op_norm_2x2(fix.matrices[s2] - targets)
                keep = (errors <= eps) | (errors == errors.min())
                s1 = np.flatnonzero(keep)
                s2 = s2[keep]
                size = len(s1)
                pool.append(
                    self._candidates(
                        [np.full(size, a_idx[p]), np.full(size, b_idx[p]), fix.a[s1], fix.b[s1], fix.a[s2], fix.b[s2]],
                        errors[keep],
                    )
                )
            if self._feasible(pool, eps, max_depth):
                break
        return pool

    def nearest_unitary(self, U: np.ndarray, eps: float, max_depth: int = None) -> Tuple[HTWord, float]:
        """Shortest word within ``eps`` of a determinant-one ``U`` in operator norm.

        Among words of equal length the smaller error wins. Corrections are
        only searched when every shorter candidate misses ``eps``, so the
        selection for a smaller ``eps`` never has a larger error.
        """
        max_depth = SynthConfig.max_depth if max_depth is None else max_depth
        U = np.asarray(U, dtype=complex)
        pool = [self._pair_pool(U)]
        if self._feasible(pool, eps, max_depth):
            return self._select(pool, eps, max_depth)
        prefixes = self.pairs_near(U, SynthConfig.refine_radius)
        pool.append(self._corrected_pool(U, prefixes))
        if not self._feasible(pool, eps, max_depth):
            logger.debug(f"nearest_unitary: two corrections needed for eps {eps:.1e}")
            pool.extend(self._twice_corrected_pool(U, prefixes, eps, max_depth))
        return self._select(pool, eps, max_depth)

    def nearest_state(self, target: np.ndarray, eps: float, max_depth: int = None) -> Tuple[HTWord, float]:
        """Shortest word w with w|0> within ``eps`` of ``target`` up to a global phase.

        When no pair is close enough, the best ``4 * refine_prefixes`` pairs
        are extended by one correction.
        """
        max_depth = SynthConfig.max_depth if max_depth is None else max_depth
        target = np.asarray(target, dtype=complex)
        rotated = _adjoint(self.matrices) @ target
        _, nn = self._state_tree.query(_bloch(rotated))
        a_idx = np.arange(len(self))
        b_idx = self._state_index[nn]
        errors = _state_distance(rotated, self.matrices[b_idx, :, 0])
        pool = [self._candidates([a_idx, b_idx], errors)]
        if self._feasible(pool, eps, max_depth):
            return self._select(pool, eps, max_depth)
        fix = self.corrections
        if len(fix):
            best = np.argsort(errors, kind="stable")[: 4 * SynthConfig.refine_prefixes]
            residual = _adjoint(self.matrices[a_idx[best]] @ self.matrices[b_idx[best]]) @ target
            k = min(4, len(fix))
            _, nn = fix.state_tree.query(_bloch(residual), k=k)
            nn = nn.reshape(len(best), k)
            for col in range(k):
                s = nn[:, col]
                pool.append(
                    self._candidates(
                        [a_idx[best], b_idx[best], fix.a[s], fix.b[s]],
                        _state_distance(residual, fix.matrices[s, :, 0]),
                    )
                )
        return self._select(pool, eps, max_depth)


class CorrectionSet:
    """Near-identity products x y of table entries with their search trees.

    Attributes:
        a (np.ndarray): Table index of x.
        b (np.ndarray): Table index of y.
        matrices (np.ndarray): The products, shape (M, 2, 2).
        radius (float): Operator-norm radius around the identity.
    """

    def __init__(self, a, b, matrices, radius: float):
        self.a = a
        self.b = b
        self.matrices = matrices
        self.radius = radius
        self.tree = cKDTree(_vec8(matrices)) if len(a) else None
        self.state_tree = cKDTree(_bloch(matrices[:, :, 0])) if len(a) else None

    def __len__(self) -> int:
        return len(self.a)


def _adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _state_distance(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    overlap = np.abs(np.sum(np.conj(u) * v, axis=-1))
    return np.sqrt(np.maximum(0.0, 2.0 - 2.0 * overlap))


@functools.lru_cache(maxsize=4)
def _cached_database(half_depth: int, table_size: int) -> WordDatabase:
    return WordDatabase.build(half_depth, table_size)


def get_database(half_depth: int = None, table_size: int = None) -> WordDatabase:
    """Return the shared read-only database for the given (or configured) size."""
    half_depth = SynthConfig.half_depth if half_depth is None else half_depth
    table_size = SynthConfig.table_size if table_size is None else table_size
    return _cached_database(int(half_depth), int(table_size))


def _check_eps(eps: float) -> None:
    if not eps >= SynthConfig.eps_min:
        raise ValueError(f"Epsilon {eps} is below the configured floor {SynthConfig.eps_min}")


def approx_su2(U, eps: float, database: WordDatabase = None) -> HTWord:
    """Approximate a determinant-one single-qubit unitary by an H/T word.

    Args:
        U (array-like): 2x2 unitary with determinant 1.
        eps (float): Operator-norm tolerance, no global phase quotient.
        database (WordDatabase, optional): Table to search; the shared one by default.

    Returns:
        HTWord: The shortest word found within ``eps``.

    Raises:
        PrecisionUnreachableError: If no word of the searched depth is within ``eps``.
    """
    U = np.asarray(U, dtype=complex).reshape(2, 2)
    _check_eps(eps)
    if not np.allclose(U.conj().T @ U, np.eye(2), atol=_DET_TOL):
        raise ValueError("Target is not unitary")
    if abs(np.linalg.det(U) - 1) > _DET_TOL:
        raise ValueError(f"Target determinant {np.linalg.det(U):.6f} is not 1")
    database = get_database() if database is None else database
    word, err = database.nearest_unitary(U, eps)
    if err <= 0.1 and word.det_power() != 0:
        raise AssertionError(f"Word determinant omega^{word.det_power()} within {err:.2e} of SU(2)")
    logger.debug(f"approx_su2: {word.K} blocks, T-count {word.t_count}, error {err:.3e}")
    return word


def approx_state(target, eps: float, database: WordDatabase = None) -> HTWord:
    """Find an H/T word w with w|0> within ``eps`` of ``target`` up to a global phase."""
    target = np.asarray(target, dtype=complex).reshape(2)
    _check_eps(eps)
    norm = np.linalg.norm(target)
    if abs(norm - 1) > 1e-10:
        raise ValueError(f"Target state is not normalized: {norm:.12f}")
    database = get_database() if database is None else database
    word, err = database.nearest_state(target, eps)
    logger.debug(f"approx_state: {word.K} blocks, T-count {word.t_count}, error {err:.3e}")
    return word
