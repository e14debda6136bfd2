#include "rmtlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rmtlab {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("failed to move output into place at '" + path + "'");
    }
}

std::string curve_to_csv(const TailCurve& curve) {
    std::ostringstream os;
    os << "eps,scale,successes,trials,p_hat,ci_lo,ci_hi\n";
    for (std::size_t i = 0; i < curve.eps_grid.size(); ++i) {
        const WilsonInterval ci = curve.ci(i);
        os << fmt17(curve.eps_grid[i]) << ',' << fmt17(curve.scale) << ','
           << curve.successes[i] << ',' << curve.trials << ',' << fmt17(curve.p_hat(i)) << ','
           << fmt17(ci.lo) << ',' << fmt17(ci.hi) << '\n';
    }
    return os.str();
}

TailCurve curve_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("eps,", 0) != 0)
        throw std::runtime_error("curve_from_csv: bad header");
    TailCurve curve;
    curve.statistic_name = "csv";
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw std::runtime_error("curve_from_csv: bad row");
        curve.eps_grid.push_back(std::stod(cells[0]));
        curve.scale = std::stod(cells[1]);
        curve.successes.push_back(std::stoll(cells[2]));
        curve.trials = std::stoll(cells[3]);
    }
    if (curve.eps_grid.empty()) throw std::runtime_error("curve_from_csv: empty curve");
    return curve;
}

std::string curve_to_svg(const TailCurve& curve, const ExponentFit& fit, double predicted) {
    const double w = 640, h = 480, margin = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < curve.eps_grid.size(); ++i) {
        const double p = curve.p_hat(i);
        if (p <= 0.0) continue;
        const double x = std::log10(curve.eps_grid[i]);
        const double y = std::log10(p);
        pts.emplace_back(x, y);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (pts.empty()) {
        xmin = -2; xmax = 0; ymin = -4; ymax = 0;
    }
    if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-9) ymax = ymin + 1.0;
    auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
    auto sy = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << curve.statistic_name
       << " tail (log-log)</text>\n";
    // data
    for (const auto& [x, y] : pts)
        os << "<circle cx=\"" << fmt17(sx(x)) << "\" cy=\"" << fmt17(sy(y))
           << "\" r=\"3\" fill=\"black\"/>\n";
    // fitted line over the data window (natural-log fit converted to log10)
    const double ln10 = std::log(10.0);
    auto fit_y = [&](double x10) { return (fit.intercept + fit.slope * x10 * ln10) / ln10; };
    os << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\" points=\""
       << fmt17(sx(xmin)) << "," << fmt17(sy(fit_y(xmin))) << " " << fmt17(sx(xmax)) << ","
       << fmt17(sy(fit_y(xmax))) << "\"/>\n";
    // predicted-slope reference anchored at the right end of the fit
    const double y0 = fit_y(xmax);
    auto pred_y = [&](double x10) { return y0 + predicted * (x10 - xmax); };
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" "
          "stroke-dasharray=\"6,4\" points=\""
       << fmt17(sx(xmin)) << "," << fmt17(sy(pred_y(xmin))) << " " << fmt17(sx(xmax)) << ","
       << fmt17(sy(pred_y(xmax))) << "\"/>\n";
    os << "<text x=\"" << w - margin << "\" y=\"" << h - 12
       << "\" text-anchor=\"end\">fit slope " << fmt17(fit.slope) << ", predicted " << fmt17(predicted)
       << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace rmtlab
