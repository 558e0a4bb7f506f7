"""
Total-degree homotopy continuation for square polynomial systems.

The target p is homogenized to P(X_0, ..., X_n) and tracked on a random
affine patch a . X = 1 of projective space, so paths heading to infinity
stay bounded and end with X_0 -> 0:

    H(X, t) = (1 - t) * gamma * Q(X) + t * P(X),   Q_j = X_j^d_j - X_0^d_j

Paths start at the roots of unity of Q and are tracked with an RK4
predictor and Newton corrections up to t = 1 - r. The endgame then loops
around t = 1 on circles |1 - t| = r until the path closes up; the mean over
the loop is the endpoint (Cauchy integral) and the number of loops is the
winding number, > 1 exactly at singular endpoints. Regular finite
endpoints are refined in extended precision with mpmath.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from tqdm import tqdm

from eulerlab.settings_utils import get_setting, get_thread_count

logger = logging.getLogger(__name__)

# path states
FINISHED = "finished"
SINGULAR = "singular"
DIVERGED = "diverged"
FAILED = "failed"

DIVERGENCE_NORM = 1e8
# a stalled path with |X_0| / max|X| below this is heading to infinity
STALLED_INFINITY = 1e-4
CORRECTOR_STEPS = 3
CORRECTOR_TOL = 1e-10
JUMP_TOL = 1e-2
MAX_PATH_STEPS = 20000
POLISH_STEPS = 6
POLISH_TOL = 1e-12

ENDGAME_RADIUS = 0.05
ENDGAME_SHRINK = 0.25
ENDGAME_RADII = 4
ENDGAME_NODES = 16
ENDGAME_TOL = 1e-8
MAX_WINDING = 12
CLOSE_TOL = 1e-6

RETRIES = 2
ENDGAME_DIGITS = 30
ENDGAME_STEPS = 50


class PolynomialSystem:
    """numpy evaluation of a square system and its Jacobian; exponents must be nonnegative."""

    def __init__(self, exponents, coefficients):
        self.exponents = [np.asarray(E, dtype=np.int64) for E in exponents]
        self.coefficients = [np.asarray(c, dtype=np.complex128) for c in coefficients]
        self.nvars = self.exponents[0].shape[1]
        self.derivatives = []
        for E, c in zip(self.exponents, self.coefficients):
            row = []
            for k in range(self.nvars):
                mask = E[:, k] > 0
                Ek = E[mask].copy()
                Ek[:, k] -= 1
                row.append((Ek, c[mask] * E[mask, k]))
            self.derivatives.append(row)

    @classmethod
    def from_polynomials(cls, polynomials, homogenize=False):
        exponents, coefficients = [], []
        for p in polynomials:
            E = np.array(p.support, dtype=np.int64).reshape(len(p), p.nvars)
            if homogenize:
                total = E.sum(axis=1)
                E = np.hstack([(total.max() - total)[:, None], E])
            exponents.append(E)
            coefficients.append([complex(v) for v in p.coefficients])
        return cls(exponents, coefficients)

    def degrees(self):
        return [int(E.sum(axis=1).max()) if len(E) else 0 for E in self.exponents]

    def __call__(self, x):
        return np.array(
            [c @ np.prod(x ** E, axis=1) for E, c in zip(self.exponents, self.coefficients)],
            dtype=np.complex128,
        )

    def jacobian(self, x):
        J = np.zeros((len(self.exponents), self.nvars), dtype=np.complex128)
        for j, row in enumerate(self.derivatives):
            for k, (Ek, ck) in enumerate(row):
                if len(ck):
                    J[j, k] = ck @ np.prod(x ** Ek, axis=1)
        return J


@dataclass
class PathResult:
    index: int
    status: str
    # affine endpoint; for diverged paths the direction at infinity
    x: np.ndarray
    t: float
    steps: int
    winding: int = 1
    attempt: int = 0
    refined: bool = False


def _close(a, b, tolerance):
    return np.linalg.norm(a - b) <= tolerance * (1 + np.linalg.norm(b))


class TotalDegreeHomotopy:
    def __init__(self, target, gamma, patch):
        """`target` is the homogenized system over (X_0, X_1, ..., X_n)."""
        self.target = target
        self.gamma = gamma
        self.patch = np.asarray(patch, dtype=np.complex128)
        self.degrees = np.array(target.degrees())

    def start_solutions(self):
        roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in self.degrees]
        starts = []
        for x in itertools.product(*roots):
            X = np.concatenate([[1.0 + 0j], np.array(x, dtype=np.complex128)])
            starts.append(X / (self.patch @ X))
        return starts

    def start_system(self, X):
        return X[1:] ** self.degrees - X[0] ** self.degrees

    def start_jacobian(self, X):
        d = self.degrees
        J = np.zeros((len(d), len(X)), dtype=np.complex128)
        J[:, 0] = -d * X[0] ** (d - 1)
        J[np.arange(len(d)), np.arange(1, len(d) + 1)] = d * X[1:] ** (d - 1)
        return J

    def H(self, X, t):
        values = (1 - t) * self.gamma * self.start_system(X) + t * self.target(X)
        return np.append(values, self.patch @ X - 1)

    def Hx(self, X, t):
        J = (1 - t) * self.gamma * self.start_jacobian(X) + t * self.target.jacobian(X)
        return np.vstack([J, self.patch])

    def Ht(self, X):
        return np.append(self.target(X) - self.gamma * self.start_system(X), 0)

    def tangent(self, X, t):
        return np.linalg.solve(self.Hx(X, t), -self.Ht(X))

    def predict(self, X, t, dt):
        k1 = self.tangent(X, t)
        k2 = self.tangent(X + dt / 2 * k1, t + dt / 2)
        k3 = self.tangent(X + dt / 2 * k2, t + dt / 2)
        k4 = self.tangent(X + dt * k3, t + dt)
        return X + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    def correct(self, X, t, steps=CORRECTOR_STEPS, tolerance=CORRECTOR_TOL):
        """Newton on H(., t); returns (converged, X, size of the first update)."""
        first = None
        for _ in range(steps):
            delta = np.linalg.solve(self.Hx(X, t), -self.H(X, t))
            X = X + delta
            size = np.linalg.norm(delta)
            if first is None:
                first = size
            if size <= tolerance * (1 + np.linalg.norm(X)):
                return True, X, first
        return False, X, first

    def segment(self, X, t0, t1, min_step, max_step):
        """
        Track X along the straight line from t0 to t1 in the complex plane.
        Returns (reached, X, t, steps).
        """
        length = abs(t1 - t0)
        tau, h, steps = 0.0, max_step, 0
        while tau < 1.0:
            steps += 1
            if steps > MAX_PATH_STEPS:
                return False, X, t0 + tau * (t1 - t0), steps
            dtau = min(h / length, 1.0 - tau)
            t = t0 + tau * (t1 - t0)
            t_next = t0 + (tau + dtau) * (t1 - t0)
            try:
                ok, X_new, jump = self.correct(self.predict(X, t, t_next - t), t_next)
            except np.linalg.LinAlgError:
                ok, X_new, jump = False, X, None
            if ok and np.all(np.isfinite(X_new)) and jump <= JUMP_TOL * (1 + np.linalg.norm(X)):
                X = X_new
                tau = 1.0 if 1.0 - (tau + dtau) < 1e-14 else tau + dtau
                h = min(2 * h, max_step)
            else:
                h *= 0.5
                if h < min_step:
                    return False, X, t, steps
        return True, X, t1, steps

    def cauchy_loop(self, X, radius, min_step):
        """
        Loop around t = 1 at distance `radius`, starting from t = 1 - radius,
        until the path returns to X. Returns (mean over the loop, winding
        number, X back at the start, steps); the mean is None if tracking
        failed or the path did not close within MAX_WINDING loops.
        """
        nodes = 1 - radius * np.exp(2j * np.pi * np.arange(ENDGAME_NODES + 1) / ENDGAME_NODES)
        chord = abs(nodes[1] - nodes[0])
        start, samples, steps = X, [], 0
        for winding in range(1, MAX_WINDING + 1):
            for k in range(ENDGAME_NODES):
                samples.append(X)
                ok, X, _, used = self.segment(X, nodes[k], nodes[k + 1], min_step, chord)
                steps += used
                if not ok:
                    return None, winding, X, steps
            if _close(X, start, CLOSE_TOL):
                return np.mean(samples, axis=0), winding, start, steps
        return None, MAX_WINDING, X, steps

    def polish(self, X):
        """Newton on H(., 1); None unless it converges to POLISH_TOL."""
        try:
            ok, X, _ = self.correct(X, 1.0, steps=POLISH_STEPS, tolerance=POLISH_TOL)
        except np.linalg.LinAlgError:
            return None
        return X if ok and np.all(np.isfinite(X)) else None

    def endpoint(self, index, X, winding, steps):
        scale = np.max(np.abs(X))
        if abs(X[0]) * DIVERGENCE_NORM <= scale:
            return PathResult(index, DIVERGED, X[1:] / scale, 1.0, steps, winding)
        status = FINISHED if winding == 1 else SINGULAR
        return PathResult(index, status, X[1:] / X[0], 1.0, steps, winding)

    def stalled(self, index, X, t, steps):
        """Classify a path that stopped early by where it was heading."""
        scale = np.max(np.abs(X))
        if abs(X[0]) <= STALLED_INFINITY * scale:
            return PathResult(index, DIVERGED, X[1:] / scale, float(np.real(t)), steps)
        return PathResult(index, FAILED, X[1:] / X[0], float(np.real(t)), steps)

    def track(self, index, start, min_step, max_step, radius=ENDGAME_RADIUS):
        ok, X, t, steps = self.segment(start, 0.0, 1.0 - radius, min_step, max_step)
        if not ok:
            return self.stalled(index, X, t, steps)
        previous = None
        for _ in range(ENDGAME_RADII):
            estimate, winding, X, used = self.cauchy_loop(X, radius, min_step)
            steps += used
            if estimate is None:
                break
            if winding == 1:
                polished = self.polish(estimate)
                if polished is not None and _close(polished, estimate, ENDGAME_TOL ** 0.5):
                    return self.endpoint(index, polished, 1, steps)
            if previous is not None and _close(estimate, previous[0], ENDGAME_TOL):
                return self.endpoint(index, estimate, winding, steps)
            previous = (estimate, winding)
            smaller = radius * ENDGAME_SHRINK
            ok, X, t, used = self.segment(X, 1.0 - radius, 1.0 - smaller, min_step, max_step)
            steps += used
            if not ok:
                return self.stalled(index, X, t, steps)
            radius = smaller
        if previous is not None:
            # the estimates kept moving; trust the smallest circle
            return self.endpoint(index, previous[0], previous[1], steps)
        return self.stalled(index, X, 1.0 - radius, steps)


def mp_number(value):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, complex):
        return mpmath.mpc(value.real, value.imag)
    return mpmath.mpf(value)


class MpPolynomial:
    """A Laurent polynomial with mpmath coefficients, for extended precision."""

    def __init__(self, polynomial):
        self.terms = [(e, mp_number(c)) for e, c in polynomial]

    def __call__(self, x):
        total = mpmath.mpc(0)
        for e, c in self.terms:
            term = c
            for xj, k in zip(x, e):
                if k:
                    term *= xj ** k
            total += term
        return total


def refine(polynomials, x, digits=ENDGAME_DIGITS, steps=ENDGAME_STEPS):
    """
    Newton refinement of a root of a square system at `digits` precision.
    Returns the refined point and whether the updates fell below 10^-(digits-5).
    """
    n = len(x)
    with mpmath.workdps(digits):
        values = [MpPolynomial(p) for p in polynomials]
        jacobian = [[MpPolynomial(p.partial(k)) for k in range(n)] for p in polynomials]
        point = mpmath.matrix([mpmath.mpc(complex(v).real, complex(v).imag) for v in x])
        threshold = mpmath.mpf(10) ** (-(digits - 5))
        converged = False
        for _ in range(steps):
            coordinates = [point[k] for k in range(n)]
            F = mpmath.matrix([f(coordinates) for f in values])
            J = mpmath.matrix([[d(coordinates) for d in row] for row in jacobian])
            try:
                delta = mpmath.lu_solve(J, -F)
            except ZeroDivisionError:
                break
            point = point + delta
            if mpmath.norm(delta) <= threshold * (1 + mpmath.norm(point)):
                converged = True
                break
        refined = np.array([complex(point[k]) for k in range(n)], dtype=np.complex128)
    return refined, converged


def random_homotopy(seed, attempt, nvars):
    """gamma on the unit circle and a random affine patch for one attempt."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x6A6D, attempt]))
    gamma = complex(np.exp(2j * np.pi * rng.uniform()))
    patch = rng.normal(size=nvars + 1) + 1j * rng.normal(size=nvars + 1)
    return gamma, patch


def path_radius(seed, attempt, index):
    """Endgame radius of one path, jittered per (seed, attempt, path)."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0xE6, attempt, index]))
    return ENDGAME_RADIUS * (1 + 0.2 * rng.uniform())


def _track_all(homotopy, seed, attempt, threads, progress):
    starts = homotopy.start_solutions()
    min_step = get_setting("EULER_PATH_MIN_STEP", 1e-6)
    max_step = get_setting("EULER_PATH_MAX_STEP", 0.1)

    def run(item):
        index, start = item
        result = homotopy.track(index, start, min_step, max_step, path_radius(seed, attempt, index))
        result.attempt = attempt
        return result

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(
            tqdm(
                executor.map(run, enumerate(starts)),
                total=len(starts),
                desc="paths",
                disable=not progress,
            )
        )


def solve_total_degree(polynomials, seed, threads=None, progress=None):
    """
    Track every total-degree path of the square system `polynomials` and
    refine the regular finite endpoints. When paths fail, the whole system
    is tracked again with a fresh gamma and patch, and the attempt with the
    fewest failures is kept. Results are ordered by path index, independent
    of the worker count.
    """
    target = PolynomialSystem.from_polynomials(polynomials, homogenize=True)
    threads = threads or get_setting("EULER_THREADS", None) or get_thread_count()
    if progress is None:
        progress = get_setting("EULER_PROGRESS", False)
    logger.info(f"solve_total_degree: degrees {target.degrees()}")

    best = None
    for attempt in range(RETRIES + 1):
        homotopy = TotalDegreeHomotopy(target, *random_homotopy(seed, attempt, target.nvars - 1))
        results = _track_all(homotopy, seed, attempt, threads, progress)
        failed = sum(r.status == FAILED for r in results)
        if best is None or failed < best[0]:
            best = (failed, results)
        if not failed:
            break
        logger.warning(f"solve_total_degree: {failed} of {len(results)} paths failed on attempt {attempt}")
    results = best[1]

    # mpmath precision is process-global, so refinement runs on this thread
    for result in results:
        if result.status == FINISHED:
            result.x, result.refined = refine(polynomials, result.x)
    counts = {status: sum(r.status == status for r in results) for status in (FINISHED, SINGULAR, DIVERGED, FAILED)}
    logger.info(f"solve_total_degree: {counts}")
    return results
