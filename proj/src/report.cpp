#include "harvestsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace harvest::report {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(Fault::IoError, "cannot write '" + path + "'");
    }
    return out;
}

std::string sanitize_cell(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

json durations_json(const sim::PhaseDurations& d) {
    return json{{"localize", d.localize},
                {"approach", d.approach},
                {"detach", d.detach},
                {"return", d.retreat}};
}

// Minimal static line/bar plotter. Fixed canvas, deterministic output.
struct Plot {
    static constexpr double kW = 760.0;
    static constexpr double kH = 420.0;
    static constexpr double kLeft = 62.0;
    static constexpr double kRight = 18.0;
    static constexpr double kTop = 34.0;
    static constexpr double kBottom = 46.0;

    struct Series {
        std::string label;
        std::string color;
        std::vector<std::pair<double, double>> pts;
    };

    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;

    static std::string num(double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.4g", v);
        return buf;
    }

    void bounds(double& x0, double& x1, double& y0, double& y1) const {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -std::numeric_limits<double>::infinity();
        for (const auto& s : series) {
            for (const auto& [x, y] : s.pts) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        }
        if (!(x1 > x0)) {
            x1 = x0 + 1.0;
        }
        if (!(y1 > y0)) {
            y1 = y0 + 1.0;
        }
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }

    void render(const std::string& path) const {
        double x0, x1, y0, y1;
        bounds(x0, x1, y0, y1);
        const double px0 = kLeft;
        const double px1 = kW - kRight;
        const double py0 = kH - kBottom;
        const double py1 = kTop;
        const auto sx = [&](double x) { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); };
        const auto sy = [&](double y) { return py0 + (y - y0) / (y1 - y0) * (py1 - py0); };

        auto out = open_out(path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
            << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
        out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
        out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

        out << "<g stroke=\"#cccccc\" stroke-width=\"1\" font-family=\"sans-serif\" "
            << "font-size=\"11\" fill=\"#333333\">\n";
        for (int i = 0; i <= 5; ++i) {
            const double fx = x0 + (x1 - x0) * i / 5.0;
            const double fy = y0 + (y1 - y0) * i / 5.0;
            out << "<line x1=\"" << sx(fx) << "\" y1=\"" << py0 << "\" x2=\"" << sx(fx)
                << "\" y2=\"" << py1 << "\"/>\n";
            out << "<line x1=\"" << px0 << "\" y1=\"" << sy(fy) << "\" x2=\"" << px1
                << "\" y2=\"" << sy(fy) << "\"/>\n";
            out << "<text x=\"" << sx(fx) << "\" y=\"" << py0 + 16
                << "\" text-anchor=\"middle\" stroke=\"none\">" << num(fx) << "</text>\n";
            out << "<text x=\"" << px0 - 6 << "\" y=\"" << sy(fy) + 4
                << "\" text-anchor=\"end\" stroke=\"none\">" << num(fy) << "</text>\n";
        }
        out << "</g>\n";
        out << "<rect x=\"" << px0 << "\" y=\"" << py1 << "\" width=\"" << px1 - px0
            << "\" height=\"" << py0 - py1 << "\" fill=\"none\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kH - 8
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
            << "</text>\n";
        out << "<text x=\"16\" y=\"" << (py0 + py1) / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 16 " << (py0 + py1) / 2 << ")\">" << ylabel
            << "</text>\n";

        double ly = py1 + 14;
        for (const auto& s : series) {
            if (!s.pts.empty()) {
                out << "<polyline fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.5\" points=\"";
                for (const auto& [x, y] : s.pts) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(x), sy(y));
                    out << buf;
                }
                out << "\"/>\n";
            }
            out << "<line x1=\"" << px1 - 150 << "\" y1=\"" << ly << "\" x2=\"" << px1 - 126
                << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
            out << "<text x=\"" << px1 - 120 << "\" y=\"" << ly + 4
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
            ly += 16;
        }
        out << "</svg>\n";
    }
};

} // namespace

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_trial_csv(const std::string& path, const sim::TrialRecord& record) {
    auto out = open_out(path);
    out << kTrialCsvHeader << "\n";
    for (const auto& r : record.log) {
        out << format_double(r.t) << ',' << format_double(r.phi) << ',' << format_double(r.theta)
            << ',' << format_double(r.d) << ',' << format_double(r.x) << ',' << format_double(r.y)
            << ',' << format_double(r.z) << ',' << format_double(r.y_r) << ','
            << format_double(r.z_r) << ',' << format_double(r.e_y) << ',' << format_double(r.e_z)
            << ',' << format_double(r.V) << ',' << format_double(r.omega_phi) << ','
            << format_double(r.omega_theta) << ',' << format_double(r.u_prismatic) << "\n";
    }
}

void write_trial_json(const std::string& path, const sim::TrialRecord& record,
                      std::uint64_t seed) {
    json doc{
        {"target_true", {record.target_true.x, record.target_true.y, record.target_true.z}},
        {"target_perceived",
         {record.target_perceived.x, record.target_perceived.y, record.target_perceived.z}},
        {"controller", sim::controller_name(record.controller)},
        {"final_error_m", record.final_error},
        {"success", record.success},
        {"end_phase", sim::phase_name(record.end_phase)},
        {"failure", record.failure},
        {"durations_s", durations_json(record.durations)},
        {"seed", seed},
    };
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

void write_batch_summary_json(const std::string& path, const sim::BatchResult& batch) {
    json doc{
        {"n", batch.n},
        {"success_rate", batch.success_rate},
        {"mean_error_m", batch.mean_error},
        {"max_error_m", batch.max_error},
        {"threshold_m", batch.threshold},
        {"seed", batch.seed},
        {"controller", sim::controller_name(batch.controller)},
        {"phase_means_s", durations_json(batch.phase_means)},
    };
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

void write_batch_trials_csv(const std::string& path, const sim::BatchResult& batch) {
    auto out = open_out(path);
    out << "trial,target_x,target_y,target_z,perceived_x,perceived_y,perceived_z,controller,"
           "final_error_m,success,end_phase,localize_s,approach_s,detach_s,return_s,failure\n";
    for (std::size_t i = 0; i < batch.trials.size(); ++i) {
        const auto& t = batch.trials[i];
        out << i << ',' << format_double(t.target_true.x) << ',' << format_double(t.target_true.y)
            << ',' << format_double(t.target_true.z) << ',' << format_double(t.target_perceived.x)
            << ',' << format_double(t.target_perceived.y) << ','
            << format_double(t.target_perceived.z) << ',' << sim::controller_name(t.controller)
            << ',' << format_double(t.final_error) << ',' << (t.success ? 1 : 0) << ','
            << sim::phase_name(t.end_phase) << ',' << format_double(t.durations.localize) << ','
            << format_double(t.durations.approach) << ',' << format_double(t.durations.detach)
            << ',' << format_double(t.durations.retreat) << ',' << sanitize_cell(t.failure)
            << "\n";
    }
}

void write_comparison_csv(const std::string& path, const std::vector<sim::ComparisonRow>& rows) {
    auto out = open_out(path);
    out << "case,controller,mean_error_mm,std_mm,repetitions,status\n";
    for (const auto& r : rows) {
        out << r.case_index + 1 << ',' << sim::controller_name(r.controller) << ',';
        if (r.reachable) {
            out << format_double(r.mean_error_mm) << ',' << format_double(r.std_mm);
        } else {
            out << ',';
        }
        out << ',' << r.repetitions << ',' << (r.reachable ? "ok" : "unreachable") << "\n";
    }
}

void plot_tracking_svg(const std::string& path, const sim::TrialRecord& record) {
    Plot p;
    p.title = "End-effector tracking";
    p.xlabel = "t [s]";
    p.ylabel = "position [m]";
    Plot::Series y{"y", "#1f77b4", {}};
    Plot::Series yr{"y ref", "#aec7e8", {}};
    Plot::Series z{"z", "#d62728", {}};
    Plot::Series zr{"z ref", "#ff9896", {}};
    for (const auto& r : record.log) {
        y.pts.emplace_back(r.t, r.y);
        yr.pts.emplace_back(r.t, r.y_r);
        z.pts.emplace_back(r.t, r.z);
        zr.pts.emplace_back(r.t, r.z_r);
    }
    p.series = {y, yr, z, zr};
    p.render(path);
}

void plot_errors_svg(const std::string& path, const sim::TrialRecord& record) {
    Plot p;
    p.title = "Tracking error";
    p.xlabel = "t [s]";
    p.ylabel = "error [mm]";
    Plot::Series ey{"e_y", "#1f77b4", {}};
    Plot::Series ez{"e_z", "#d62728", {}};
    for (const auto& r : record.log) {
        ey.pts.emplace_back(r.t, 1000.0 * r.e_y);
        ez.pts.emplace_back(r.t, 1000.0 * r.e_z);
    }
    p.series = {ey, ez};
    p.render(path);
}

void plot_lyapunov_svg(const std::string& path, const sim::TrialRecord& record) {
    Plot p;
    p.title = "Error energy";
    p.xlabel = "t [s]";
    p.ylabel = "V [m^2]";
    Plot::Series v{"V", "#2ca02c", {}};
    for (const auto& r : record.log) {
        v.pts.emplace_back(r.t, r.V);
    }
    p.series = {v};
    p.render(path);
}

void plot_batch_errors_svg(const std::string& path, const sim::BatchResult& batch) {
    Plot p;
    p.title = "Final grasp error per trial";
    p.xlabel = "trial";
    p.ylabel = "error [mm]";
    Plot::Series e{"final error", "#1f77b4", {}};
    Plot::Series thr{"threshold", "#d62728", {}};
    for (std::size_t i = 0; i < batch.trials.size(); ++i) {
        e.pts.emplace_back(static_cast<double>(i), 1000.0 * batch.trials[i].final_error);
    }
    thr.pts.emplace_back(0.0, 1000.0 * batch.threshold);
    thr.pts.emplace_back(static_cast<double>(batch.trials.empty() ? 1 : batch.trials.size() - 1),
                         1000.0 * batch.threshold);
    p.series = {e, thr};
    p.render(path);
}

void plot_comparison_svg(const std::string& path, const std::vector<sim::ComparisonRow>& rows) {
    Plot p;
    p.title = "Mean final error by case and controller";
    p.xlabel = "case";
    p.ylabel = "mean error [mm]";
    Plot::Series open{"open-loop", "#d62728", {}};
    Plot::Series pos{"position", "#ff7f0e", {}};
    Plot::Series prop{"proposed", "#2ca02c", {}};
    for (const auto& r : rows) {
        if (!r.reachable) {
            continue;
        }
        const double x = static_cast<double>(r.case_index + 1);
        switch (r.controller) {
        case sim::ControllerKind::OpenLoop: open.pts.emplace_back(x, r.mean_error_mm); break;
        case sim::ControllerKind::Position: pos.pts.emplace_back(x, r.mean_error_mm); break;
        case sim::ControllerKind::Proposed: prop.pts.emplace_back(x, r.mean_error_mm); break;
        }
    }
    p.series = {open, pos, prop};
    p.render(path);
}

} // namespace harvest::report
