#include "circpack/svg.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "circpack/analysis.hpp"

namespace circpack {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

std::string render_svg(const Packing& p, const RenderOptions& opt) {
    if (!(p.container_radius > 0.0))
        throw std::invalid_argument("render_svg: container radius must be positive");
    const int s = opt.size_px;
    const double margin = 0.02 * s;
    const double scale = (s / 2.0 - margin) / p.container_radius;
    const auto X = [&](double x) { return s / 2.0 + scale * x; };
    const auto Y = [&](double y) { return s / 2.0 - scale * y; };

    std::vector<char> unshaded(p.size(), 0);
    for (int i : opt.rattlers)
        if (i >= 0 && i < p.size()) unshaded[i] = 1;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << s << "\" height=\"" << s
       << "\" viewBox=\"0 0 " << s << " " << s << "\">\n";
    os << "  <circle cx=\"" << fmt(X(0)) << "\" cy=\"" << fmt(Y(0)) << "\" r=\""
       << fmt(scale * p.container_radius)
       << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";

    if (opt.draw_bonds && p.size() > 1) {
        const ContactGraph g = contact_graph(p, opt.bond_threshold);
        os << "  <g stroke=\"#d04030\" stroke-width=\"1\">\n";
        for (const auto& b : g.disk_bonds) {
            os << "    <line x1=\"" << fmt(X(p.centers[b.a].x)) << "\" y1=\""
               << fmt(Y(p.centers[b.a].y)) << "\" x2=\"" << fmt(X(p.centers[b.b].x))
               << "\" y2=\"" << fmt(Y(p.centers[b.b].y)) << "\"/>\n";
        }
        os << "  </g>\n";
    }

    os << "  <g stroke=\"#404040\" stroke-width=\"0.8\">\n";
    for (int i = 0; i < p.size(); ++i) {
        os << "    <circle cx=\"" << fmt(X(p.centers[i].x)) << "\" cy=\""
           << fmt(Y(p.centers[i].y)) << "\" r=\"" << fmt(scale * p.disk_radius) << "\" fill=\""
           << (unshaded[i] ? "none" : "#c9d6e8") << "\"/>\n";
    }
    os << "  </g>\n";

    if (opt.draw_labels) {
        const double fs = std::max(6.0, scale * p.disk_radius * 0.8);
        os << "  <g font-family=\"monospace\" font-size=\"" << fmt(fs)
           << "\" text-anchor=\"middle\" fill=\"#202020\">\n";
        for (int i = 0; i < p.size(); ++i) {
            os << "    <text x=\"" << fmt(X(p.centers[i].x)) << "\" y=\""
               << fmt(Y(p.centers[i].y) + fs * 0.35) << "\">" << i << "</text>\n";
        }
        os << "  </g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const Packing& p, const std::string& path, const RenderOptions& opt) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_svg: cannot open " + path);
    f << render_svg(p, opt);
}

}  // namespace circpack
