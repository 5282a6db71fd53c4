#pragma once

// Scenario configuration: a sectioned key-value text format and its in-memory
// form. SI units throughout.
//
//   [scenario]      name, description
//   [geometry]      Lx, Ly, nx, ny
//   [solid]         model (neo_hookean | linear_elastic), lambda, mu, phi0, density
//   [mixture]       volume_fraction (affine_solid | incompressible_solid | unsaturated), gravity, g
//   [fluid.<name>]  model (ideal_gas | vdw | incompressible_liquid | constant_bulk), its parameters,
//                   phi0, P0 or p, conductivity or kappa + viscosity
//   [bc.<tag>]      traction = tx ty, ux, uy, tie = ux|uy, eta.<fluid>, p.<fluid>, P0.<fluid>,
//                   flux.<fluid>, flux_center, flux_width
//   [time]          t_end, dt, dt0, growth, plot_times
//   [output]        directory, cadence, probes = name x y; ..., profile = x0 y0 x1 y1, profile_points, vtk
//   [solver]        rel_tol, abs_tol, max_iter, max_halvings, threads, transport (galerkin | upwind)

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace poromech::io {

struct GeometryConfig {
    double Lx = 10.0;
    double Ly = 5.0;
    int nx = 20;
    int ny = 10;
    bool operator==(const GeometryConfig&) const = default;
};

struct SolidConfig {
    std::string model = "neo_hookean";
    double lambda = 0.0;
    double mu = 0.0;
    double phi0 = 1.0;
    double density = 0.0;  ///< grain density, body force only
    bool operator==(const SolidConfig&) const = default;
};

struct MixtureConfig {
    std::string volume_fraction = "affine_solid";
    bool gravity = false;
    double g = 9.81;
    bool operator==(const MixtureConfig&) const = default;
};

struct FluidConfig {
    std::string name;
    std::string model;
    double R = 8.32;
    double T = 300.0;
    double xi = 1.0;
    double molar_mass = 0.029;
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double rho_tilde = 1000.0;
    double K_f = 0.0;
    double rho_ref = 0.0;
    double phi0 = 0.0;
    std::optional<double> P0;  ///< initial referential density
    std::optional<double> p;   ///< or initial pressure
    std::optional<double> conductivity;
    double kappa = 0.0;
    double viscosity = 0.0;
    bool operator==(const FluidConfig&) const = default;
};

struct BcConfig {
    std::string tag;
    std::optional<std::array<double, 2>> traction;
    std::optional<double> ux;
    std::optional<double> uy;
    std::optional<std::string> tie;
    std::map<std::string, double> eta;
    std::map<std::string, double> p;
    std::map<std::string, double> P0;
    std::map<std::string, double> flux;
    std::optional<double> flux_center;
    std::optional<double> flux_width;
    bool operator==(const BcConfig&) const = default;
};

struct Probe {
    std::string name;
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Probe&) const = default;
};

struct TimeConfig {
    double t_end = 0.0;
    double dt = 0.0;      ///< largest step
    double dt0 = 0.0;     ///< first step; 0 means dt
    double growth = 1.0;  ///< step growth factor until dt is reached; 1 jumps to dt after the first step
    std::vector<double> plot_times;
    bool operator==(const TimeConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    int cadence = 50;
    std::vector<Probe> probes;
    std::optional<std::array<double, 4>> profile;
    int profile_points = 41;
    bool vtk = true;
    bool operator==(const OutputConfig&) const = default;
};

struct SolverConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_iter = 25;
    int max_halvings = 10;
    int threads = 1;
    std::string transport = "galerkin";  ///< or "upwind"
    bool operator==(const SolverConfig&) const = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string description;
    GeometryConfig geometry;
    SolidConfig solid;
    MixtureConfig mixture;
    std::vector<FluidConfig> fluids;
    std::vector<BcConfig> bcs;
    TimeConfig time;
    OutputConfig output;
    SolverConfig solver;

    int fluid_index(std::string_view name) const;
    bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ParseError(line, message) or ValidationError(field, message).
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a file; throws IoError if it cannot be read.
ScenarioConfig load_config(const std::string& path);

/// Text that parses back to an equal config.
std::string serialize_config(const ScenarioConfig& config);

/// Throws ValidationError.
void validate(const ScenarioConfig& config);

}  // namespace poromech::io
