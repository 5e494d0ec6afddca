#include "plots.hpp"

#include <sstream>

namespace gla::cli {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string gnuplot_script(const std::string& output_stem, const std::vector<PlotPanel>& panels) {
    std::ostringstream os;
    os << "# gnuplot script; reads the CSV files in this directory.\n"
       << "# Render with: gnuplot " << output_stem << ".gp\n"
       << "set datafile separator \",\"\n"
       << "set terminal pngcairo size 900," << 300 * (panels.empty() ? 1 : panels.size()) << "\n"
       << "set output " << quoted(output_stem + ".png") << "\n"
       << "set grid\n"
       << "set key outside right\n";
    if (panels.size() > 1) os << "set multiplot layout " << panels.size() << ",1\n";
    for (const auto& p : panels) {
        os << "set title " << quoted(p.title) << "\n"
           << "set xlabel " << quoted(p.xlabel) << "\n"
           << "set ylabel " << quoted(p.ylabel) << "\n";
        os << (p.logscale ? "set logscale xy\n" : "unset logscale\n");
        os << "plot ";
        for (std::size_t i = 0; i < p.series.size(); ++i) {
            const auto& s = p.series[i];
            if (i) os << ", \\\n     ";
            os << quoted(s.csv) << " using (column(" << quoted(s.x) << ")):(column(" << quoted(s.y) << ")) with "
               << s.style << " title " << quoted(s.title);
        }
        os << "\n";
    }
    if (panels.size() > 1) os << "unset multiplot\n";
    return os.str();
}

}  // namespace gla::cli
