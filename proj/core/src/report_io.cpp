#include "gwin/report_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gwin {

namespace {

nlohmann::json ms_json(const MeanStd& ms) {
  return {{"mean", ms.mean}, {"std", ms.std}};
}

nlohmann::json opt_json(const std::optional<MeanStd>& ms) {
  if (!ms) return nullptr;
  return ms_json(*ms);
}

std::string ms_str(const std::optional<MeanStd>& ms) {
  if (!ms) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << ms->mean << "+-" << ms->std;
  return os.str();
}

}  // namespace

void write_rows_jsonl(const std::vector<ThresholdRow>& rows,
                      const std::string& dataset,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const auto& r : rows) {
    nlohmann::json j{{"dataset", dataset},
                     {"tau", r.tau},
                     {"pct_reject", ms_json(r.pct_reject)},
                     {"bnn_acc_rejected", opt_json(r.bnn_acc_rejected)},
                     {"bnn_gwin_acc_rejected", opt_json(r.bnn_gwin_acc_rejected)},
                     {"rejected_acc_delta", opt_json(r.rejected_acc_delta)},
                     {"overall_acc_baseline", ms_json(r.overall_acc_baseline)},
                     {"overall_acc_gwin", ms_json(r.overall_acc_gwin)},
                     {"overall_acc_delta", ms_json(r.overall_acc_delta)},
                     {"pct_error_delta", opt_json(r.pct_error_delta)},
                     {"n_runs", r.n_runs}};
    out << j.dump() << "\n";
  }
}

void write_table_csv(const std::vector<ThresholdRow>& rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "tau,pct_reject,pct_reject_std,bnn_acc,bnn_acc_std,"
         "bnn_gwin_acc,bnn_gwin_acc_std,rejected_acc_delta,"
         "rejected_acc_delta_std,overall_acc_delta,overall_acc_delta_std,"
         "pct_error_delta,pct_error_delta_std,n_runs\n";
  auto put = [&out](const std::optional<MeanStd>& ms) {
    if (ms)
      out << ms->mean << "," << ms->std;
    else
      out << ",";
  };
  for (const auto& r : rows) {
    out << r.tau << "," << r.pct_reject.mean << "," << r.pct_reject.std << ",";
    put(r.bnn_acc_rejected);
    out << ",";
    put(r.bnn_gwin_acc_rejected);
    out << ",";
    put(r.rejected_acc_delta);
    out << "," << r.overall_acc_delta.mean << "," << r.overall_acc_delta.std
        << ",";
    put(r.pct_error_delta);
    out << "," << r.n_runs << "\n";
  }
}

std::string format_table_text(const std::vector<ThresholdRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "tau" << std::setw(16) << "% reject"
     << std::setw(16) << "BNN acc." << std::setw(18) << "BNN+GWIN acc."
     << std::setw(18) << "Rejected delta" << std::setw(16) << "Overall delta"
     << std::setw(16) << "% error delta" << "\n";
  for (const auto& r : rows) {
    std::ostringstream tau;
    tau << std::fixed << std::setprecision(2) << r.tau;
    os << std::left << std::setw(6) << tau.str() << std::setw(16)
       << ms_str(r.pct_reject) << std::setw(16) << ms_str(r.bnn_acc_rejected)
       << std::setw(18) << ms_str(r.bnn_gwin_acc_rejected) << std::setw(18)
       << ms_str(r.rejected_acc_delta) << std::setw(16)
       << ms_str(r.overall_acc_delta) << std::setw(16)
       << ms_str(r.pct_error_delta) << "\n";
  }
  return os.str();
}

namespace {

constexpr double kW = 640, kH = 420, kMargin = 60;

double sx(double frac) { return kMargin + frac * (kW - 2 * kMargin); }
double sy(double frac) { return kH - kMargin - frac * (kH - 2 * kMargin); }

void svg_header(std::ofstream& out) {
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW
      << "' height='" << kH << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<line x1='" << sx(0) << "' y1='" << sy(0) << "' x2='" << sx(1)
      << "' y2='" << sy(0) << "' stroke='black'/>\n"
      << "<line x1='" << sx(0) << "' y1='" << sy(0) << "' x2='" << sx(0)
      << "' y2='" << sy(1) << "' stroke='black'/>\n";
}

}  // namespace

void write_accuracy_svg(const std::vector<ThresholdRow>& rows,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  svg_header(out);
  if (!rows.empty()) {
    double amin = 100.0, amax = 0.0;
    for (const auto& r : rows) {
      for (const auto& v : {r.bnn_acc_rejected, r.bnn_gwin_acc_rejected}) {
        if (!v) continue;
        amin = std::min(amin, v->mean);
        amax = std::max(amax, v->mean);
      }
    }
    if (amax <= amin) amax = amin + 1.0;
    auto plot = [&](bool gwin, const char* color) {
      out << "<polyline fill='none' stroke='" << color << "' points='";
      for (const auto& r : rows) {
        const auto& v = gwin ? r.bnn_gwin_acc_rejected : r.bnn_acc_rejected;
        if (!v) continue;
        out << sx(r.tau) << "," << sy((v->mean - amin) / (amax - amin)) << " ";
      }
      out << "'/>\n";
    };
    plot(false, "steelblue");
    plot(true, "darkorange");
    out << "<text x='" << sx(0.05) << "' y='" << sy(0.97)
        << "' fill='steelblue'>BNN (rejected subset)</text>\n"
        << "<text x='" << sx(0.05) << "' y='" << sy(0.91)
        << "' fill='darkorange'>BNN+GWIN (rejected subset)</text>\n"
        << "<text x='" << sx(0.45) << "' y='" << kH - 20
        << "'>certainty threshold</text>\n";
  }
  out << "</svg>\n";
}

void write_boxplot_svg(const std::vector<CertaintyDeltaStats>& stats,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  svg_header(out);
  if (!stats.empty()) {
    double lo = -1.0, hi = 1.0;
    auto y = [&](double v) { return sy((v - lo) / (hi - lo)); };
    const double step = 1.0 / double(stats.size() + 1);
    for (size_t i = 0; i < stats.size(); ++i) {
      const auto& s = stats[i];
      const double cx = sx(step * double(i + 1));
      const double half = 18.0;
      out << "<line x1='" << cx << "' y1='" << y(s.lo_whisker) << "' x2='"
          << cx << "' y2='" << y(s.hi_whisker) << "' stroke='black'/>\n"
          << "<rect x='" << cx - half << "' y='" << y(s.q3) << "' width='"
          << 2 * half << "' height='" << y(s.q1) - y(s.q3)
          << "' fill='lightsteelblue' stroke='black'/>\n"
          << "<line x1='" << cx - half << "' y1='" << y(s.median) << "' x2='"
          << cx + half << "' y2='" << y(s.median)
          << "' stroke='black' stroke-width='2'/>\n";
      for (double o : s.outliers)
        out << "<circle cx='" << cx << "' cy='" << y(o)
            << "' r='2' fill='black'/>\n";
      out << "<text x='" << cx - 14 << "' y='" << kH - 20 << "'>"
          << std::fixed << std::setprecision(2) << s.tau << "</text>\n";
    }
    out << "<line x1='" << sx(0) << "' y1='" << y(0.0) << "' x2='" << sx(1)
        << "' y2='" << y(0.0) << "' stroke='gray' stroke-dasharray='4'/>\n";
  }
  out << "</svg>\n";
}

}  // namespace gwin
