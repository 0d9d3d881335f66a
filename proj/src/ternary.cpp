#include "mfmp/ternary.hpp"

#include <cmath>
#include <sstream>

namespace mfmp {

namespace {

constexpr double kRoot3Over2 = 0.86602540378443865;

void csv_row(std::ostringstream& os, const std::string& kind, const std::string& label,
             int section, int stage, const std::vector<double>& x, bool project) {
    os << kind << ',' << label << ',' << section << ',' << stage;
    if (project) {
        auto [px, py] = ternary_point(x);
        os << ',' << px << ',' << py;
    } else {
        os << ",,";
    }
    for (double v : x) os << ',' << v;
    os << '\n';
}

std::pair<double, double> to_canvas(std::pair<double, double> p, double w, double margin) {
    // y axis flipped for SVG
    return {margin + p.first * w, margin + (kRoot3Over2 - p.second) * w};
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

}  // namespace

std::pair<double, double> ternary_point(const std::vector<double>& x) {
    if (x.size() != 3) throw NotTernary("ternary projection needs exactly 3 components");
    return {x[1] + 0.5 * x[2], kRoot3Over2 * x[2]};
}

TernaryDocument ternary_export(const ColumnSpec& spec, const MinRefluxResult& result,
                               const StageProfile& profile) {
    const int c = spec.components.count();
    const bool project = c == 3;
    TernaryDocument doc;

    std::ostringstream csv;
    csv << "kind,label,section,stage,tx,ty";
    for (int i = 0; i < c; ++i) {
        csv << ",x_" << (spec.components.names.empty() ? std::to_string(i + 1)
                                                       : spec.components.names[i]);
    }
    csv << '\n';

    for (int i = 0; i < c; ++i) {
        std::vector<double> pure(c, 0.0);
        pure[i] = 1.0;
        csv_row(csv, "vertex", "X" + std::to_string(i + 1), 0, 0, pure, project);
    }

    for (const auto& s : spec.streams) {
        std::vector<double> comp(c, 0.0);
        double tot = 0.0;
        for (int i = 0; i < c; ++i) {
            comp[i] = std::abs(s.liquid_flows[i]) > 0.0 ? std::abs(s.liquid_flows[i])
                                                        : std::abs(s.vapor_flows[i]);
            tot += comp[i];
        }
        for (double& v : comp) v /= tot;
        csv_row(csv, "stream", s.name, s.position, 0, comp, project);
    }

    std::vector<PinchGeometry> simplices;
    for (const auto& sec : result.sections) {
        auto geo = pinch_compositions(sec, spec.components);
        for (int r = 0; r < c; ++r)
            csv_row(csv, "pinch", "Z" + std::to_string(r + 1), sec.index, 0, geo.vertices[r],
                    project);
        simplices.push_back(std::move(geo));
    }

    for (std::size_t n = 0; n < profile.x.size(); ++n)
        csv_row(csv, "profile", "stage" + std::to_string(n), profile.section_of_stage[n],
                static_cast<int>(n), profile.x[n], project);
    doc.csv = csv.str();

    if (!project) return doc;

    const double w = 560.0, margin = 40.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 2 * margin << "\" height=\""
        << w * kRoot3Over2 + 2 * margin << "\" viewBox=\"0 0 " << w + 2 * margin << ' '
        << w * kRoot3Over2 + 2 * margin << "\">\n";
    auto pt = [&](const std::vector<double>& x) { return to_canvas(ternary_point(x), w, margin); };

    std::vector<double> v1{1, 0, 0}, v2{0, 1, 0}, v3{0, 0, 1};
    auto p1 = pt(v1), p2 = pt(v2), p3 = pt(v3);
    svg << "<polygon points=\"" << p1.first << ',' << p1.second << ' ' << p2.first << ','
        << p2.second << ' ' << p3.first << ',' << p3.second
        << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.5\"/>\n";
    const char* corner_names[3] = {"X1", "X2", "X3"};
    const std::pair<double, double> corners[3] = {p1, p2, p3};
    for (int i = 0; i < 3; ++i)
        svg << "<text x=\"" << corners[i].first << "\" y=\"" << corners[i].second + (i == 2 ? -8 : 16)
            << "\" font-size=\"13\" text-anchor=\"middle\">" << corner_names[i] << "</text>\n";

    for (std::size_t k = 0; k < simplices.size(); ++k) {
        const char* color = kPalette[k % 6];
        svg << "<polygon points=\"";
        for (const auto& z : simplices[k].vertices) {
            auto p = pt(z);
            svg << p.first << ',' << p.second << ' ';
        }
        svg << "\" fill=\"" << color << "\" fill-opacity=\"0.12\" stroke=\"" << color
            << "\" stroke-width=\"1\"/>\n";
        for (const auto& z : simplices[k].vertices) {
            auto p = pt(z);
            svg << "<circle cx=\"" << p.first << "\" cy=\"" << p.second << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        }
    }

    for (const auto& s : spec.streams) {
        std::vector<double> comp(3, 0.0);
        double tot = 0.0;
        for (int i = 0; i < 3; ++i) {
            comp[i] = std::abs(s.flows[i]);
            tot += comp[i];
        }
        for (double& v : comp) v /= tot;
        auto p = pt(comp);
        svg << "<rect x=\"" << p.first - 3.5 << "\" y=\"" << p.second - 3.5
            << "\" width=\"7\" height=\"7\" fill=\"#000\"/>\n"
            << "<text x=\"" << p.first + 6 << "\" y=\"" << p.second - 6
            << "\" font-size=\"12\">" << s.name << "</text>\n";
    }

    svg << "<polyline points=\"";
    for (const auto& x : profile.x) {
        auto p = pt(x);
        svg << p.first << ',' << p.second << ' ';
    }
    svg << "\" fill=\"none\" stroke=\"#1a1a88\" stroke-width=\"1\" stroke-dasharray=\"2,2\"/>\n";
    for (const auto& x : profile.x) {
        auto p = pt(x);
        svg << "<circle cx=\"" << p.first << "\" cy=\"" << p.second
            << "\" r=\"1.6\" fill=\"#1a1a88\"/>\n";
    }
    svg << "</svg>\n";
    doc.svg = svg.str();
    return doc;
}

}  // namespace mfmp
