#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace decoh::cli {

struct Sweep {
    std::string axis;
    double min = 0.0, max = 0.0;
    int points = 0;
    bool log = false;
    std::vector<double> values() const;
};

struct Physical {
    double mass = 0.0, lambda = 0.0, buffer_density = 0.0, scattering_length = 0.0, buffer_cross_section = 0.0;
};

struct RunConfig {
    std::string command;
    std::string format;  // csv | json; empty picks the command's default
    std::string output;  // empty: stdout

    double a_over_lambda = 0.0;
    double s_over_lambda = 0.0;
    std::optional<double> L_over_lambda;
    std::vector<int> occ{1, 0}, occ_prime{0, 1};
    std::optional<Sweep> sweep;
    std::string quantity = "D";  // sweep: D | gamma

    // evolve
    int nmax = 2;
    std::string state = "1,0:1;0,1:1";
    std::vector<double> times{0.0, 0.5, 1.0};
    std::string method = "exact";
    std::string omega_mode = "include";

    // bound
    std::vector<double> s_over_a{2.0, 3.0};
    bool curve = false;
    double u_max = 6.0;
    int curve_points = 601;

    // wave (hbar = m = 1, lengths in units of s)
    double a_plus = 1.5, a_minus = 0.5, k0 = 10.0, angle = 0.5235987755982988, t = 10.0;
    double r_min = 1.0, r_max = 150.0;
    int r_points = 300;
    std::string site = "plus";

    std::optional<Physical> physical;
    double rel_tol = 1e-10;

    void validate() const;
};

// parse argv-style arguments (without program name); throws InvalidInput on bad config
RunConfig parse_args(const std::vector<std::string>& args, std::ostream& help_out, bool& help_requested);

// execute; writes the result to the configured sink
void execute(const RunConfig& cfg, std::ostream& out);

// parse + execute with exit codes 0 / 2 (config) / 3 (numeric); error record as JSON on err
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string fmt17(double x);

}  // namespace decoh::cli
