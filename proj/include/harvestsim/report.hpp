#pragma once

#include <string>
#include <vector>

#include "harvestsim/cycle.hpp"

namespace harvest::report {

inline constexpr const char* kTrialCsvHeader =
    "t,phi,theta,D,x,y,z,y_r,z_r,e_y,e_z,V,omega_phi,omega_theta,u_prismatic";

// Fixed "%.9g" float formatting throughout, so identical inputs produce
// byte-identical files.
void write_trial_csv(const std::string& path, const sim::TrialRecord& record);
void write_trial_json(const std::string& path, const sim::TrialRecord& record,
                      std::uint64_t seed);

void write_batch_summary_json(const std::string& path, const sim::BatchResult& batch);
void write_batch_trials_csv(const std::string& path, const sim::BatchResult& batch);

void write_comparison_csv(const std::string& path, const std::vector<sim::ComparisonRow>& rows);

// Static SVG renderings of a trial log.
void plot_tracking_svg(const std::string& path, const sim::TrialRecord& record);
void plot_errors_svg(const std::string& path, const sim::TrialRecord& record);
void plot_lyapunov_svg(const std::string& path, const sim::TrialRecord& record);
void plot_batch_errors_svg(const std::string& path, const sim::BatchResult& batch);
void plot_comparison_svg(const std::string& path, const std::vector<sim::ComparisonRow>& rows);

std::string format_double(double v);

} // namespace harvest::report
