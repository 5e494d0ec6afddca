#pragma once

#include <string>
#include <vector>

namespace gla::cli {

struct PlotSeries {
    std::string csv;  // file name beside the script
    std::string x;    // column header
    std::string y;    // column header
    std::string title;
    std::string style = "lines";
};

struct PlotPanel {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<PlotSeries> series;
    bool logscale = false;
};

// Plain gnuplot script that reads only the CSVs named in the series.
std::string gnuplot_script(const std::string& output_stem, const std::vector<PlotPanel>& panels);

}  // namespace gla::cli
