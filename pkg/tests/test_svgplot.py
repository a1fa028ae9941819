from fractions import Fraction

from mvproj.geometry import CellComplex, ConvexCell, pt
from mvproj.pwl1 import Pwl1
from mvproj.pwl2 import Pwl2
from mvproj.svgplot import svg_complex_layers, svg_function_2d, svg_functions_1d
from mvproj.terms import compile_term, unit_zero_term

F = Fraction


class TestDeterminism:
    def test_function_plot_byte_stable(self):
        fns = [(Pwl1.identity(), "id"), (compile_term(unit_zero_term(13), 1), "pin")]
        assert svg_functions_1d(fns) == svg_functions_1d(fns)

    def test_complex_plot_byte_stable(self):
        layers = [(CellComplex.build([ConvexCell.from_points([pt(0, 0), pt(1, 1)])]), "d")]
        assert svg_complex_layers(layers) == svg_complex_layers(layers)

    def test_function_2d_byte_stable(self):
        f = Pwl2.coordinate(1)
        assert svg_function_2d(f, "x") == svg_function_2d(f, "x")


class TestShape:
    def test_unit_zero_vertex_at_the_pin(self):
        # the V-shaped graph has its vertex at (1/13, 0)
        l13 = compile_term(unit_zero_term(13), 1)
        svg = svg_functions_1d([(l13, "")])
        assert svg.startswith("<svg ")
        # node dot at x = 40 + (1/13)*480 = 76.92..., y = 40 + 480 = 520
        assert '<circle cx="76.92" cy="520.00" r="3"/>' in svg

    def test_empty_complex_is_valid_svg(self):
        svg = svg_complex_layers([(CellComplex.empty(), "nothing")])
        assert svg.startswith("<svg ") and svg.rstrip().endswith("</svg>")
        assert 'id="layer-0"' in svg

    def test_layers_have_stable_ids(self):
        square = CellComplex.build(
            [ConvexCell.from_points([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])])
        svg = svg_complex_layers([(square, "a"), (square, "b")])
        assert 'id="layer-0"' in svg and 'id="layer-1"' in svg

    def test_no_floats_in_output(self):
        # fixed two-decimal coordinates only
        svg = svg_functions_1d([(Pwl1.identity(), "id")])
        import re
        for num in re.findall(r'="(-?\d+\.\d+)"', svg):
            assert len(num.split(".")[1]) == 2
