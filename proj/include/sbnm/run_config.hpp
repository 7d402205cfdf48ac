// run_config.hpp: Run configuration from `key = value` files plus flag overrides

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sbnm::cli {

enum class Solver { exact, tcl2, analytic };

const char* solver_name(Solver s) noexcept;
Solver parse_solver(const std::string& name);  // ConfigError naming the three solvers

struct RunConfig {
    Solver solver{Solver::analytic};
    double alpha{0.0};
    double omega_c{20.0};
    double delta{1.0};
    double t_max{15.0};
    double dt{1e-3};
    std::size_t n_modes{200};
    double omega_max{0.0};  // 0 → 6·ω_c
    int n_exc{2};
    int krylov_dim{20};
    double krylov_tol{1e-10};
    double eps_sigma{1e-10};
    std::string out{"-"};

    // Sweep fields.
    std::vector<double> alphas;
    std::vector<double> omega_cs;
    int jobs{1};
    double analytic_below{0.1};  // sweep points with α below this use the closed forms

    std::vector<std::string> warnings;

    void validate() const;  // ConfigError
    double effective_omega_max() const;
};

// Raw settings with their origin, for error messages.
struct ConfigEntry {
    std::string value;
    std::string origin;  // "line 7" or "flag --alpha"
};
using ConfigEntries = std::map<std::string, ConfigEntry>;

const std::vector<std::string>& valid_keys();

// `key = value` lines; `#` starts a comment; blank lines ignored. ConfigError with the
// line number on malformed lines and unknown keys.
ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);

// Later entries win. The solver must be present somewhere.
RunConfig parse_config(const ConfigEntries& file_entries, const ConfigEntries& overrides);

} // namespace sbnm::cli
