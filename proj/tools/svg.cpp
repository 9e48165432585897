#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace fst::cli {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg_plot(std::ostream& os, const PlotSpec& spec,
                    const std::vector<Series>& series) {
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = spec.width - ml - mr;
    const double ph = spec.height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : series) {
        for (auto [x, y] : s.points) {
            if (spec.log_y && !(y > 0.0)) continue;
            const double yy = spec.log_y ? std::log10(y) : y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) {
        const double yy = spec.log_y ? std::log10(y) : y;
        return mt + ph - (yy - ymin) / (ymax - ymin) * ph;
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
       << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
       << ' ' << spec.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << spec.width / 2 << "\" y=\"24\" font-size=\"16\" "
          "text-anchor=\"middle\" font-family=\"sans-serif\">"
       << escape(spec.title) << "</text>\n";

    // frame
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
       << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // ticks
    const int nticks = 6;
    os << "<g font-size=\"11\" font-family=\"sans-serif\" fill=\"#333\">\n";
    for (int i = 0; i <= nticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / nticks;
        const double px = X(fx);
        os << "<line x1=\"" << px << "\" y1=\"" << mt + ph << "\" x2=\"" << px
           << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << px << "\" y=\"" << mt + ph + 18
           << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";

        const double fy = ymin + (ymax - ymin) * i / nticks;
        const double py = mt + ph - ph * i / nticks;
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml
           << "\" y2=\"" << py << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4
           << "\" text-anchor=\"end\">"
           << fmt(spec.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 8
       << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << mt + ph / 2
       << ")\">" << escape(spec.y_label) << "</text>\n";
    os << "</g>\n";

    // series
    for (const Series& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << " points=\"";
        for (auto [x, y] : s.points) {
            if (spec.log_y && !(y > 0.0)) continue;
            os << fmt(X(x)) << ',' << fmt(Y(y)) << ' ';
        }
        os << "\"/>\n";
    }

    // legend
    os << "<g font-size=\"12\" font-family=\"sans-serif\">\n";
    double ly = mt + 14;
    for (const Series& s : series) {
        os << "<line x1=\"" << ml + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
           << ml + 36 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
           << "\" stroke-width=\"2\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << "/>\n";
        os << "<text x=\"" << ml + 42 << "\" y=\"" << ly << "\">"
           << escape(s.label) << "</text>\n";
        ly += 16;
    }
    os << "</g>\n</svg>\n";
}

}  // namespace fst::cli
