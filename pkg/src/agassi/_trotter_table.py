"""Frozen Trotter grouping for the 8-site (j=2) Hamiltonian structure.

Groups of (x_mask, z_mask) pairs covering every string the model can
produce; members of a group commute pairwise for any couplings, so each
group exponential is exact.  Both the assignment of strings to groups and
the application order were fixed offline by minimizing the measured
first-order product-formula error; a greedy coloring gives the same group
count but a noticeably larger error constant.  Group order is the
application order of one Trotter step."""

J2_TROTTER_GROUPS: tuple[tuple[tuple[int, int], ...], ...] = (
    (
        (0xf, 0x5),
        (0xf, 0x6),
        (0xf, 0x9),
        (0xf, 0xa),
        (0x33, 0x12),
        (0x33, 0x21),
        (0x3c, 0x14),
        (0x3c, 0x24),
        (0x3c, 0x28),
        (0xc3, 0x41),
        (0xc3, 0x42),
        (0xc3, 0x82),
        (0xcc, 0x48),
        (0xcc, 0x84),
        (0xf0, 0xa0),
    ),
    (
        (0x0, 0x2),
        (0x0, 0x4),
        (0x0, 0x9),
        (0x0, 0x60),
        (0x0, 0x90),
        (0x69, 0x27),
        (0x69, 0x2e),
        (0x69, 0x47),
        (0x69, 0x4e),
        (0x99, 0x77),
        (0x99, 0x7e),
        (0x99, 0xee),
        (0xf0, 0x50),
    ),
    (
        (0x33, 0x11),
        (0x33, 0x22),
        (0x3c, 0x18),
        (0x55, 0x22),
        (0x55, 0x77),
        (0x5a, 0x24),
        (0x5a, 0x7e),
        (0x66, 0x0),
        (0x66, 0x66),
        (0x69, 0x6),
        (0x69, 0x6f),
        (0x96, 0x60),
        (0x96, 0xf6),
        (0x99, 0x66),
        (0x99, 0xff),
        (0xa5, 0x42),
        (0xa5, 0xe7),
        (0xaa, 0x44),
        (0xaa, 0xee),
        (0xc3, 0x81),
        (0xcc, 0x44),
        (0xcc, 0x88),
        (0xf0, 0x60),
        (0xf0, 0x90),
    ),
    (
        (0x0, 0x1),
        (0x0, 0x6),
        (0x0, 0x8),
        (0x0, 0x10),
        (0x0, 0x18),
        (0x0, 0x24),
        (0x0, 0x42),
        (0x0, 0x80),
        (0x0, 0x81),
        (0x66, 0x6),
        (0x66, 0x22),
        (0x66, 0x24),
        (0x66, 0x42),
        (0x66, 0x44),
        (0x66, 0x60),
    ),
    (
        (0x55, 0x27),
        (0x55, 0x72),
        (0x5a, 0x2e),
        (0x5a, 0x74),
        (0x69, 0xf),
        (0x69, 0x66),
        (0x96, 0x66),
        (0x96, 0xf0),
        (0x99, 0x6f),
        (0x99, 0xf6),
        (0xa5, 0x47),
        (0xa5, 0xe2),
        (0xaa, 0x4e),
        (0xaa, 0xe4),
    ),
    (
        (0x0, 0x20),
        (0x0, 0x40),
        (0x96, 0x72),
        (0x96, 0x74),
        (0x96, 0xe2),
        (0x96, 0xe4),
        (0x99, 0xe7),
    ),
    (
        (0x0, 0x0),
        (0x55, 0x33),
        (0x55, 0x36),
        (0x55, 0x63),
        (0x55, 0x66),
        (0x5a, 0x36),
        (0x5a, 0x3c),
        (0x5a, 0x66),
        (0x5a, 0x6c),
        (0xa5, 0x63),
        (0xa5, 0x66),
        (0xa5, 0xc3),
        (0xa5, 0xc6),
        (0xaa, 0x66),
        (0xaa, 0x6c),
        (0xaa, 0xc6),
        (0xaa, 0xcc),
        (0xf0, 0xf0),
    ),
    (
        (0xf, 0x0),
        (0xf, 0x3),
        (0xf, 0xc),
        (0xf, 0xf),
        (0x33, 0x0),
        (0x33, 0x3),
        (0x33, 0x30),
        (0x33, 0x33),
        (0x3c, 0x0),
        (0x3c, 0xc),
        (0x3c, 0x30),
        (0x3c, 0x3c),
        (0xc3, 0x0),
        (0xc3, 0x3),
        (0xc3, 0xc0),
        (0xc3, 0xc3),
        (0xcc, 0x0),
        (0xcc, 0xc),
        (0xcc, 0xc0),
        (0xcc, 0xcc),
        (0xf0, 0x0),
        (0xf0, 0x30),
        (0xf0, 0xc0),
    ),
)
