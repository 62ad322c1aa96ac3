#include "flatbound/render.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "flatbound/errors.hpp"

namespace flatbound {

namespace {

using Point = std::pair<Rational, Rational>;

const std::array<Point, 3> kCorners{Point{40, 480}, Point{560, 480}, Point{300, 30}};
const std::array<const char*, 8> kPalette{"#8dd3c7", "#ffffb3", "#bebada", "#fb8072",
                                          "#80b1d3", "#fdb462", "#b3de69", "#fccde5"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string coord(const Point& p) { return format_fixed(p.first) + "," + format_fixed(p.second); }

// Half-plane index then cross product: an exact angular order around the origin.
bool angle_less(const Point& a, const Point& b) {
    auto half = [](const Point& p) { return p.second.sign() < 0 || (p.second.is_zero() && p.first.sign() > 0) ? 0 : 1; };
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return (a.first * b.second - a.second * b.first).sign() > 0;
}

Point centroid(const std::vector<Point>& pts) {
    Rational x, y;
    for (const auto& p : pts) {
        x += p.first;
        y += p.second;
    }
    const Rational k(static_cast<long>(pts.size()));
    return {x / k, y / k};
}

std::vector<Point> ordered_pixels(const std::vector<Vec>& vs) {
    std::vector<Point> pts;
    for (const auto& v : vs) pts.push_back(simplex_to_pixel(v));
    if (pts.size() < 3) return pts;
    const Point c = centroid(pts);
    std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
        return angle_less({a.first - c.first, a.second - c.second}, {b.first - c.first, b.second - c.second});
    });
    return pts;
}

void draw_shape(std::ostringstream& svg, const std::vector<Point>& pts, const std::string& style_2d,
                const std::string& style_1d, const std::string& style_0d) {
    if (pts.size() >= 3) {
        svg << "  <polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) svg << (i ? " " : "") << coord(pts[i]);
        svg << "\" " << style_2d << "/>\n";
    } else if (pts.size() == 2) {
        svg << "  <line x1=\"" << format_fixed(pts[0].first) << "\" y1=\"" << format_fixed(pts[0].second) << "\" x2=\""
            << format_fixed(pts[1].first) << "\" y2=\"" << format_fixed(pts[1].second) << "\" " << style_1d << "/>\n";
    } else if (pts.size() == 1) {
        svg << "  <circle cx=\"" << format_fixed(pts[0].first) << "\" cy=\"" << format_fixed(pts[0].second)
            << "\" r=\"4\" " << style_0d << "/>\n";
    }
}

}  // namespace

std::pair<Rational, Rational> simplex_to_pixel(const Vec& p) {
    if (p.size() != 3) throw InputError("a diagram point needs 3 coordinates");
    Rational x, y;
    for (std::size_t i = 0; i < 3; ++i) {
        x += p[i] * kCorners[i].first;
        y += p[i] * kCorners[i].second;
    }
    return {x, y};
}

std::string format_fixed(const Rational& x) {
    const mpq_class scaled = abs(x).raw() * 100 + mpq_class(1, 2);
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    const bool negative = x.sign() < 0 && z != 0;
    std::string digits = z.get_str();
    if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
    return (negative ? "-" : "") + digits.substr(0, digits.size() - 2) + "." + digits.substr(digits.size() - 2);
}

std::string render_simplex(const PropertyCells& target, const std::vector<Annotation>& annotations,
                           const std::vector<Flat>& flats, const std::string& title) {
    if (target.num_outcomes() != 3) throw PreconditionError("rendering supports exactly 3 outcomes");
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"520\" viewBox=\"0 0 600 520\">\n";
    if (!title.empty()) svg << "  <title>" << xml_escape(title) << "</title>\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"600\" height=\"520\" fill=\"#ffffff\"/>\n";

    std::vector<std::pair<Point, std::string>> labels;
    for (std::size_t i = 0; i < target.cells().size(); ++i) {
        const auto& cell = target.cells()[i];
        const std::string color = kPalette[i % kPalette.size()];
        const auto pts = ordered_pixels(vertices(cell.region));
        draw_shape(svg, pts, "fill=\"" + color + "\" stroke=\"#333333\" stroke-width=\"1\"",
                   "stroke=\"" + color + "\" stroke-width=\"4\"", "fill=\"" + color + "\" stroke=\"#333333\"");
        if (!pts.empty()) labels.emplace_back(centroid(pts), cell.report);
    }
    svg << "  <polygon points=\"" << coord(kCorners[0]) << " " << coord(kCorners[1]) << " " << coord(kCorners[2])
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";

    for (const auto& flat : flats) {
        if (flat.outcomes.size() != 3) throw InputError("flat does not have 3 outcomes");
        const Polyhedron f = flat_polyhedron(flat);
        draw_shape(svg, ordered_pixels(vertices(f)), "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2.5\" stroke-dasharray=\"6,3\"",
                   "stroke=\"#d62728\" stroke-width=\"2.5\"", "fill=\"#d62728\"");
    }

    svg << "  <g font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">\n";
    for (const auto& [at, label] : labels) {
        svg << "    <text x=\"" << format_fixed(at.first) << "\" y=\"" << format_fixed(at.second + 5) << "\">"
            << xml_escape(label) << "</text>\n";
    }
    const std::array<Point, 3> outcome_at{Point{40, 502}, Point{560, 502}, Point{300, 20}};
    for (std::size_t i = 0; i < 3; ++i) {
        svg << "    <text x=\"" << format_fixed(outcome_at[i].first) << "\" y=\"" << format_fixed(outcome_at[i].second)
            << "\" font-weight=\"bold\">" << xml_escape(target.outcomes()[i]) << "</text>\n";
    }
    svg << "  </g>\n";

    for (const auto& a : annotations) {
        Distribution check(a.point);  // validates the point
        const Point at = simplex_to_pixel(check.probs());
        svg << "  <circle cx=\"" << format_fixed(at.first) << "\" cy=\"" << format_fixed(at.second)
            << "\" r=\"5\" fill=\"#000000\"/>\n";
        svg << "  <text x=\"" << format_fixed(at.first + 8) << "\" y=\"" << format_fixed(at.second - 8)
            << "\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(a.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_simplex(const DiscreteLoss& loss, const std::vector<Annotation>& annotations,
                           const std::vector<Flat>& flats, const std::string& title) {
    if (loss.num_outcomes() != 3) throw PreconditionError("rendering supports exactly 3 outcomes");
    return render_simplex(elicited_property(loss), annotations, flats, title);
}

}  // namespace flatbound
