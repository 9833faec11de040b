"""Small exact linear algebra over Q and Z on lists of Fractions/ints."""

from fractions import Fraction


def echelon(rows):
    """Row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    out, pivots = [], []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    out = rows[:r]
    return out, pivots


def rank(rows):
    return len(echelon(rows)[1])


def solve_combination(vectors, target):
    """Rational coefficients c with sum c_i * vectors[i] == target, or None."""
    n = len(vectors)
    if n == 0:
        return [] if all(x == 0 for x in target) else None
    dim = len(target)
    # columns are the vectors; augmented with target
    rows = [[vectors[j][i] for j in range(n)] + [target[i]] for i in range(dim)]
    red, piv = echelon(rows)
    if n in piv:
        return None
    coeffs = [Fraction(0)] * n
    for row, c in zip(red, piv):
        coeffs[c] = row[n]
    return coeffs


class IntegerLattice:
    """Z-span of integer row vectors kept in Hermite normal form."""

    def __init__(self, rows):
        self.basis = _hnf([list(map(int, r)) for r in rows])

    @property
    def rank(self):
        return len(self.basis)

    def contains(self, vec):
        v = list(vec)
        if any(not isinstance(x, int) for x in v):
            if any(Fraction(x).denominator != 1 for x in v):
                return False
            v = [int(x) for x in v]
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x)
            if v[c] % row[c]:
                return False
            q = v[c] // row[c]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return all(x == 0 for x in v)


def _hnf(rows):
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    for c in range(ncols):
        active = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            head = active[0]
            new = [head]
            for r in active[1:]:
                q = r[c] // head[c]
                r = [a - q * b for a, b in zip(r, head)]
                if r[c] != 0:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            active = new
        if active:
            head = active[0]
            if head[c] < 0:
                head = [-a for a in head]
            out.append(head)
        rows = rest
    # reduce entries above pivots so the form is canonical
    for i, row in enumerate(out):
        c = next(k for k, x in enumerate(row) if x)
        for j in range(i):
            q = out[j][c] // row[c]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], row)]
    return out
