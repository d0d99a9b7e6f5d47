# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""GMP-backed fraction-free simplex tableau.

Same surface and arithmetic as ``_tableau_py.Tableau``; entries live in a
contiguous ``mpz_t`` block and the pivot loop runs without touching Python
objects.
"""

from libc.stdlib cimport malloc, free
from cpython.bytes cimport PyBytes_AsString

IMPLEMENTATION = "gmp"

cdef extern from "gmp.h" nogil:
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct *mpz_ptr

    void mpz_init(mpz_ptr)
    void mpz_init_set(mpz_ptr, mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_ptr)
    void mpz_set_si(mpz_ptr, long)
    int mpz_set_str(mpz_ptr, const char *, int)
    char *mpz_get_str(char *, int, mpz_ptr)
    size_t mpz_sizeinbase(mpz_ptr, int)
    int mpz_fits_slong_p(mpz_ptr)
    long mpz_get_si(mpz_ptr)
    void mpz_mul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_submul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_divexact(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_neg(mpz_ptr, mpz_ptr)
    int mpz_sgn(mpz_ptr)
    int mpz_cmp(mpz_ptr, mpz_ptr)


cdef long _SMALL = 1 << 62


cdef void _from_py(mpz_ptr z, object x) except *:
    if -_SMALL < x < _SMALL:
        mpz_set_si(z, <long>x)
        return
    cdef bytes s = format(x, "x").encode("ascii")
    if mpz_set_str(z, PyBytes_AsString(s), 16) != 0:
        raise ValueError("cannot convert integer to mpz")


cdef object _to_py(mpz_ptr z):
    if mpz_fits_slong_p(z):
        return mpz_get_si(z)
    cdef size_t size = mpz_sizeinbase(z, 16) + 2
    cdef char *buf = <char *>malloc(size)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_get_str(buf, 16, z)
        return int(buf.decode("ascii"), 16)
    finally:
        free(buf)


cdef class Tableau:
    cdef __mpz_struct *data
    cdef __mpz_struct d
    cdef Py_ssize_t m, n

    def __cinit__(self, rows):
        self.data = NULL
        self.m = 0
        self.n = 0
        mpz_init(&self.d)
        mpz_set_si(&self.d, 1)

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("tableau needs at least one row")
        cdef Py_ssize_t m = len(rows), n = len(rows[0]), i, j
        if any(len(r) != n for r in rows):
            raise ValueError("tableau rows must have equal length")
        self.data = <__mpz_struct *>malloc(m * n * sizeof(__mpz_struct))
        if self.data == NULL:
            raise MemoryError()
        for i in range(m * n):
            mpz_init(&self.data[i])
        self.m = m
        self.n = n
        for i in range(m):
            r = rows[i]
            for j in range(n):
                _from_py(&self.data[i * n + j], int(r[j]))

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.data != NULL:
            for i in range(self.m * self.n):
                mpz_clear(&self.data[i])
            free(self.data)
        mpz_clear(&self.d)

    @property
    def nrows(self):
        return self.m

    @property
    def ncols(self):
        return self.n

    @property
    def denominator(self):
        return _to_py(&self.d)

    cdef inline mpz_ptr _at(self, Py_ssize_t i, Py_ssize_t j):
        return &self.data[i * self.n + j]

    cdef void _check(self, Py_ssize_t i, Py_ssize_t j) except *:
        if not (0 <= i < self.m and 0 <= j < self.n):
            raise IndexError("tableau index out of range")

    def get(self, Py_ssize_t i, Py_ssize_t j):
        self._check(i, j)
        return _to_py(self._at(i, j))

    def sign(self, Py_ssize_t i, Py_ssize_t j):
        self._check(i, j)
        return mpz_sgn(self._at(i, j))

    def row(self, Py_ssize_t i):
        self._check(i, 0)
        return [_to_py(self._at(i, j)) for j in range(self.n)]

    def column(self, Py_ssize_t j):
        self._check(0, j)
        return [_to_py(self._at(i, j)) for i in range(self.m)]

    def pivot(self, Py_ssize_t r, Py_ssize_t s):
        self._check(r, s)
        if mpz_sgn(self._at(r, s)) == 0:
            raise ZeroDivisionError("pivot element is zero")
        cdef Py_ssize_t i, j, n = self.n
        cdef __mpz_struct *pr = self._at(r, 0)
        cdef __mpz_struct *row
        cdef mpz_t p, f, tmp
        mpz_init_set(p, self._at(r, s))
        mpz_init(f)
        mpz_init(tmp)
        cdef bint same = mpz_cmp(p, &self.d) == 0
        with nogil:
            for i in range(self.m):
                if i == r:
                    continue
                row = &self.data[i * n]
                mpz_set(f, &row[s])
                if mpz_sgn(f) == 0:
                    if not same:
                        for j in range(n):
                            if mpz_sgn(&row[j]) != 0:
                                mpz_mul(tmp, &row[j], p)
                                mpz_divexact(&row[j], tmp, &self.d)
                else:
                    for j in range(n):
                        mpz_mul(tmp, &row[j], p)
                        mpz_submul(tmp, f, &pr[j])
                        mpz_divexact(&row[j], tmp, &self.d)
            if mpz_sgn(p) < 0:
                for i in range(self.m * n):
                    mpz_neg(&self.data[i], &self.data[i])
                mpz_neg(&self.d, p)
            else:
                mpz_set(&self.d, p)
        mpz_clear(p)
        mpz_clear(f)
        mpz_clear(tmp)

    def first_negative(self, Py_ssize_t i, Py_ssize_t stop):
        self._check(i, 0)
        cdef Py_ssize_t j
        for j in range(min(stop, self.n)):
            if mpz_sgn(self._at(i, j)) < 0:
                return j
        return -1

    def first_nonzero(self, Py_ssize_t i, Py_ssize_t stop):
        self._check(i, 0)
        cdef Py_ssize_t j
        for j in range(min(stop, self.n)):
            if mpz_sgn(self._at(i, j)) != 0:
                return j
        return -1

    def ratio_test(self, Py_ssize_t s, Py_ssize_t rhs, Py_ssize_t nrows, keys):
        self._check(0, s)
        self._check(0, rhs)
        cdef Py_ssize_t i, best = -1
        cdef int c
        cdef mpz_t lhs, rr
        mpz_init(lhs)
        mpz_init(rr)
        try:
            for i in range(min(nrows, self.m)):
                if mpz_sgn(self._at(i, s)) <= 0:
                    continue
                if best < 0:
                    best = i
                    continue
                mpz_mul(lhs, self._at(i, rhs), self._at(best, s))
                mpz_mul(rr, self._at(best, rhs), self._at(i, s))
                c = mpz_cmp(lhs, rr)
                if c < 0 or (c == 0 and keys[i] < keys[best]):
                    best = i
        finally:
            mpz_clear(lhs)
            mpz_clear(rr)
        return best
