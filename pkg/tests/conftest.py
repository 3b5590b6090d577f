import random

from prodbasis import GF, QQ, Matrix, TensorVector

SMALL_FIELDS = [GF(2), GF(3), GF(5), QQ]
ALL_FIELDS = [GF(2), GF(3), GF(5), GF(101), QQ]


def field_id(f):
    return str(f)


def rand_scalar(f, rng, bound=10):
    return f.sample(rng, bound)


def rand_matrix(f, rng, rows, cols, bound=10):
    return Matrix(f, [[f.sample(rng, bound) for _ in range(cols)] for _ in range(rows)])


def rand_tensor(shape, f, rng, bound=10):
    return TensorVector(shape, f, [f.sample(rng, bound) for _ in range(shape.total)])


def rand_nonzero_tensor(shape, f, rng, bound=10):
    while True:
        v = rand_tensor(shape, f, rng, bound)
        if not v.is_zero:
            return v


def seeded(seed):
    return random.Random(seed)
