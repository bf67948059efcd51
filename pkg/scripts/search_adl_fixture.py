"""Search for a small embeddable system with a full-domain diagonaliser.

Enumerates associative composition tables on four expressions by
backtracking, then every encoding onto two constants and every embedding
back, and keeps the first system that has a diagonaliser while avoiding
degenerate cases: projections, compositions or star tables with fewer than
three distinct values, non-injective embeddings, constant diag, and systems
where every expression is a fixed point of every other.  The result is
written as a JSON system descriptor.

    python scripts/search_adl_fixture.py src/arrowlab/data/adl_fixture.json
"""

import itertools
import json
import sys

import numpy as np

sys.path.insert(0, "src")

from arrowlab.srs import EmbeddableSrs, Srs, check_embeddable, dump_system, find_diagonaliser, verify_adl

N_EXPR = 4
N_CONST = 2


def associative_tables(n):
    cells = [(a, b) for a in range(n) for b in range(n)]
    t = [[None] * n for _ in range(n)]

    def consistent():
        for a, b, c in itertools.product(range(n), repeat=3):
            ab, bc = t[a][b], t[b][c]
            if ab is None or bc is None:
                continue
            lhs, rhs = t[ab][c], t[a][bc]
            if lhs is not None and rhs is not None and lhs != rhs:
                return False
        return True

    def fill(k):
        if k == len(cells):
            yield [row[:] for row in t]
            return
        a, b = cells[k]
        for v in range(n):
            t[a][b] = v
            if consistent():
                yield from fill(k + 1)
        t[a][b] = None

    yield from fill(0)


def degenerate(comp):
    n = len(comp)
    E = np.arange(n)
    left = (comp == E[:, None]).all()
    right = (comp == E[None, :]).all()
    sparse = len(np.unique(comp)) < 3
    return left or right or sparse


def search():
    for rows in associative_tables(N_EXPR):
        comp = np.array(rows)
        if degenerate(comp):
            continue
        for enc in itertools.product(range(N_CONST), repeat=N_EXPR):
            if len(set(enc)) < N_CONST:
                continue
            for emb in itertools.product(range(N_EXPR), repeat=N_CONST):
                if len(set(emb)) < N_CONST:
                    continue
                app = comp[:, list(emb)]
                S = Srs(np.array(enc), app, name="adl-fixture")
                ES = EmbeddableSrs(S, np.array(emb), comp)
                st = S.star_table
                E = np.arange(N_EXPR)
                if (st == E[None, :]).all() or (st == E[:, None]).all() or (st == st[0, 0]).all():
                    continue
                if len(np.unique(st)) < 3 or len(set(ES.diag(E).tolist())) < 2:
                    continue
                f = find_diagonaliser(ES)
                if f is None:
                    continue
                fixed_everywhere = all(
                    (st[e] == E).all() for e in range(N_EXPR))
                if fixed_everywhere:
                    continue
                assert check_embeddable(S, emb, comp).ok
                assert verify_adl(ES).passed
                return ES
    raise SystemExit("no fixture found")


if __name__ == "__main__":
    ES = search()
    out = dump_system(ES)
    path = sys.argv[1] if len(sys.argv) > 1 else "adl_fixture.json"
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1)
        fh.write("\n")
    print(json.dumps(out))
