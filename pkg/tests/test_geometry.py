import random
from fractions import Fraction

from mvproj.geometry import (
    CellComplex,
    ConvexCell,
    UNIT_SQUARE,
    affine_image,
    cell_clip,
    cell_intersection,
    complex_contains,
    complex_intersection,
    complex_union,
    complexes_equal,
    form,
    is_connected,
    pt,
    split_cells_by_lines,
)

F = Fraction


def square():
    return ConvexCell.from_points([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])


def tri(*pts):
    return ConvexCell.from_points([pt(*p) for p in pts])


def seg(a, b):
    return ConvexCell.from_points([pt(*a), pt(*b)])


def grid_points(d):
    return [(F(i, d), F(j, d)) for i in range(d + 1) for j in range(d + 1)]


class TestConvexCell:
    def test_from_points_normalizes_downward(self):
        assert tri((0, 0), (1, 1), (F(1, 2), F(1, 2))).kind == "segment"
        assert ConvexCell.from_points([pt(1, 2), pt(1, 2)]).kind == "point"
        assert square().kind == "polygon"

    def test_polygon_canonical_order(self):
        a = ConvexCell.from_points([pt(1, 1), pt(0, 1), pt(0, 0), pt(1, 0)])
        assert a == square()
        assert a.vertices[0] == pt(0, 0)
        assert a.area2() > 0  # CCW

    def test_canonicalization_idempotent(self):
        rng = random.Random(7)
        for _ in range(50):
            pts = [(F(rng.randint(-4, 4), rng.randint(1, 5)),
                    F(rng.randint(-4, 4), rng.randint(1, 5))) for _ in range(rng.randint(1, 8))]
            cell = ConvexCell.from_points(pts)
            assert ConvexCell.from_points(cell.vertices) == cell


class TestClip:
    def test_halfplane_containing_cell(self):
        assert cell_clip(square(), form(1, 0, 0)) == square()

    def test_boundary_clip_degenerates_to_segment(self):
        got = cell_clip(square(), form(-1, 0, 0))
        assert got == seg((0, 0), (0, 1))

    def test_triangle_clip_to_hypotenuse(self):
        t = tri((0, 0), (1, 0), (0, 1))
        got = cell_clip(t, form(1, 1, -1))  # x + y - 1 >= 0
        assert got == seg((0, 1), (1, 0))

    def test_clip_never_violates_halfplane(self):
        rng = random.Random(3)
        for _ in range(200):
            pts = [(F(rng.randint(-3, 3), rng.randint(1, 4)),
                    F(rng.randint(-3, 3), rng.randint(1, 4))) for _ in range(rng.randint(1, 7))]
            cell = ConvexCell.from_points(pts)
            f = form(rng.randint(-3, 3), rng.randint(-3, 3), F(rng.randint(-3, 3), rng.randint(1, 3)))
            if f.is_constant:
                continue
            got = cell_clip(cell, f)
            if got is not None:
                assert all(f(v) >= 0 for v in got.vertices)


class TestAffineImage:
    def test_identity(self):
        assert affine_image(square(), form(1, 0, 0), form(0, 1, 0)) == square()

    def test_rank_one_collapse(self):
        got = affine_image(square(), form(1, 0, 0), form(1, 0, 0))
        assert got == seg((0, 0), (1, 1))

    def test_point_evaluation(self):
        p = ConvexCell.from_points([pt(F(1, 2), F(1, 3))])
        got = affine_image(p, form(2, 0, 0), form(0, 3, 0))
        assert got == ConvexCell.from_points([pt(1, 1)])

    def test_image_is_hull_of_mapped_vertices(self):
        rng = random.Random(11)
        for _ in range(100):
            pts = [(F(rng.randint(0, 4), 4), F(rng.randint(0, 4), 4)) for _ in range(rng.randint(1, 6))]
            cell = ConvexCell.from_points(pts)
            fx = form(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-1, 1))
            fy = form(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-1, 1))
            img = affine_image(cell, fx, fy)
            mapped = {(fx(v), fy(v)) for v in cell.vertices}
            assert set(img.vertices) <= mapped
            assert img == ConvexCell.from_points(list(mapped))


class TestComplex:
    def test_union_with_empty(self):
        c = CellComplex.build([square()])
        assert complex_union(CellComplex.empty(), c) == c

    def test_collinear_segments_merge(self):
        a = CellComplex.build([seg((0, 0), (F(1, 2), 0))])
        b = CellComplex.build([seg((F(1, 2), 0), (1, 0))])
        got = complex_union(a, b)
        assert got.cells == (seg((0, 0), (1, 0)),)

    def test_overlapping_triangles_cover_square(self):
        t1 = tri((0, 0), (1, 0), (1, 1))
        t2 = tri((0, 0), (1, 1), (0, 1))
        t3 = tri((0, 0), (1, 0), (0, 1))  # overlaps both
        got = complex_union(CellComplex.build([t1, t2]), CellComplex.build([t3]))
        assert complexes_equal(got, CellComplex.build([square()]))
        # oracle: every grid point of the square is covered
        for p in grid_points(8):
            assert got.contains_point(p)

    def test_cell_containment_removed(self):
        inner = tri((F(1, 4), F(1, 4)), (F(1, 2), F(1, 4)), (F(1, 4), F(1, 2)))
        got = CellComplex.build([square(), inner, ConvexCell.from_points([pt(0, 0)])])
        assert got.cells == (square(),)

    def test_canonical_idempotent(self):
        rng = random.Random(5)
        for _ in range(30):
            cells = []
            for _ in range(rng.randint(1, 5)):
                pts = [(F(rng.randint(0, 6), 6), F(rng.randint(0, 6), 6)) for _ in range(rng.randint(1, 6))]
                cells.append(ConvexCell.from_points(pts))
            c = CellComplex.build(cells)
            assert CellComplex.build(c.cells) == c


class TestContains:
    def test_square_contains_diagonal(self):
        outer = CellComplex.build([square()])
        inner = CellComplex.build([seg((0, 0), (1, 1))])
        assert complex_contains(outer, inner) == (True, None)

    def test_segment_does_not_contain_square(self):
        outer = CellComplex.build([seg((0, 0), (1, 1))])
        inner = CellComplex.build([square()])
        ok, witness = complex_contains(outer, inner)
        assert not ok
        assert witness is not None
        assert inner.contains_point(witness) and not outer.contains_point(witness)

    def test_square_with_hole_misses_full_square(self):
        # four trapezoids around a central square hole (1/3..2/3)^2
        a, b = F(1, 3), F(2, 3)
        outer = CellComplex.build([
            ConvexCell.from_points([pt(0, 0), pt(1, 0), pt(b, a), pt(a, a)]),
            ConvexCell.from_points([pt(1, 0), pt(1, 1), pt(b, b), pt(b, a)]),
            ConvexCell.from_points([pt(1, 1), pt(0, 1), pt(a, b), pt(b, b)]),
            ConvexCell.from_points([pt(0, 1), pt(0, 0), pt(a, a), pt(a, b)]),
        ])
        inner = CellComplex.build([square()])
        ok, witness = complex_contains(outer, inner)
        assert not ok
        assert a < witness[0] < b and a < witness[1] < b
        assert not outer.contains_point(witness)

    def test_agrees_with_grid_sampling_oracle(self):
        rng = random.Random(19)
        for _ in range(25):
            def rand_cells(k):
                cells = []
                for _ in range(k):
                    pts = [(F(rng.randint(0, 4), 4), F(rng.randint(0, 4), 4))
                           for _ in range(rng.randint(1, 5))]
                    cells.append(ConvexCell.from_points(pts))
                return CellComplex.build(cells)

            outer, inner = rand_cells(3), rand_cells(2)
            ok, witness = complex_contains(outer, inner)
            if ok:
                # sampling can only confirm containment
                for p in grid_points(8):
                    if inner.contains_point(p):
                        assert outer.contains_point(p)
            else:
                assert inner.contains_point(witness)
                assert not outer.contains_point(witness)


class TestConnectivity:
    def test_single_polygon(self):
        assert is_connected(CellComplex.build([square()]))

    def test_disjoint_segments(self):
        c = CellComplex.build([seg((0, 0), (0, 1)), seg((1, 0), (1, 1))])
        assert not is_connected(c)

    def test_vertex_contact_counts(self):
        c = CellComplex.build([tri((0, 0), (1, 0), (0, 1)),
                               tri((1, 1), (1, F(1, 2)), (F(1, 2), 1))])
        assert not is_connected(c)
        c2 = CellComplex.build([tri((0, 0), (F(1, 2), 0), (0, F(1, 2))),
                                tri((F(1, 2), 0), (1, 0), (F(1, 2), F(1, 2)))])
        assert is_connected(c2)


class TestIntersectionAndArrangement:
    def test_complex_intersection(self):
        diag = CellComplex.build([seg((0, 0), (1, 1))])
        anti = CellComplex.build([seg((0, 1), (1, 0))])
        got = complex_intersection(diag, anti)
        assert got.cells == (ConvexCell.from_points([pt(F(1, 2), F(1, 2))]),)

    def test_split_square_by_diagonals(self):
        faces = split_cells_by_lines([UNIT_SQUARE], [form(1, -1, 0), form(1, 1, -1)])
        assert len(faces) == 4
        total = sum(f.area2() for f in faces)
        assert total == 2  # twice the unit area

    def test_cell_intersection_segment_segment(self):
        got = cell_intersection(seg((0, 0), (1, 1)), seg((0, 1), (1, 0)))
        assert got == ConvexCell.from_points([pt(F(1, 2), F(1, 2))])
