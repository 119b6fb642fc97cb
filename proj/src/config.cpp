#include "complab/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

namespace complab {

const std::vector<Knob>& knob_catalog()
{
    static const std::vector<Knob> knobs = {
        {"potential.family", "square_well", "free | square_well | woods_saxon | pure_coulomb"},
        {"potential.depth_energy", "-3", "well depth (square well, Woods-Saxon)"},
        {"potential.R0_length", "2", "cutoff radius; pure Coulomb beyond it"},
        {"potential.Vc_strength", "0", "Coulomb tail strength Vc in Vc / r"},
        {"potential.ell", "0", "angular momentum"},
        {"potential.ws_radius_length", "1.5", "Woods-Saxon radius"},
        {"potential.ws_diffuseness_length", "0.3", "Woods-Saxon diffuseness"},
        {"potential.nonlocal_strength_energy", "0", "Gaussian non-local strength; 0 disables it"},
        {"potential.nonlocal_width_length", "0.5", "Gaussian non-local width"},

        {"experiment.kind", "spectrum", "experiment to run"},
        {"experiment.label", "", "free-form label copied to the report"},

        {"numerics.R_length", "20", "box radius"},
        {"numerics.R_sequence_length", "20,40,80", "box radii for R sweeps"},
        {"numerics.k_max_momentum", "10", "spectrum cutoff"},
        {"numerics.M_sequence", "500,1000,2000", "series truncations for box kernels and expansions"},
        {"numerics.accelerated", "true", "closed-form tail for box kernels"},
        {"numerics.K_momentum", "200", "integral cutoff"},
        {"numerics.K_sequence_momentum", "5,10,20,40,80", "cutoff sweep"},
        {"numerics.quadrature_order", "64", "Gauss order per k panel"},
        {"numerics.N_bound", "0", "bound states added to the open kernel"},
        {"numerics.bound_sweep", "false", "open kernel: also sweep the number of bound terms"},
        {"numerics.grid_points", "21", "points per axis of the kernel grid"},
        {"numerics.grid_lo_length", "0", "kernel grid start; 0: 0.1 R0"},
        {"numerics.grid_hi_length", "0", "kernel grid end; 0: 0.9 R (box) or 3 R0 (open)"},
        {"numerics.k_momentum", "2", "fixed momentum for spacing studies"},
        {"numerics.k_eps_momentum", "0.2", "low-k threshold"},
        {"numerics.k_sequence_momentum", "", "momentum ladder; empty: study default"},
        {"numerics.r_length", "1", "first radius of point studies"},
        {"numerics.rp_length", "1.5", "second radius of point studies"},
        {"numerics.m_lo", "20", "fit window start (level index)"},
        {"numerics.m_hi", "200", "fit window end (level index)"},
        {"numerics.n_lo", "4", "bound-state window start (node count)"},
        {"numerics.n_hi", "12", "bound-state window end (node count)"},
        {"numerics.study", "", "study selector for scaling-study and lowk-study"},
        {"numerics.target", "step", "expand: eigenstate | step | bump"},
        {"numerics.step_length", "5", "jump radius of the step target"},
        {"numerics.Vc_sequence_strength", "0,1,3", "Coulomb strengths for the delta kernel"},
        {"numerics.samples", "1000", "random samples for special-function probes"},
        {"numerics.tolerance", "0", "override of the principal check tolerance; 0: default"},

        {"output.output_dir", "out", "directory for CSV artifacts"},
        {"output.workers", "0", "worker threads; 0: hardware concurrency"},
    };
    return knobs;
}

namespace {

const Knob* find_knob(const std::string& key)
{
    for (const Knob& k : knob_catalog())
        if (k.key == key) return &k;
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
}

bool is_numeric_key(const std::string& key)
{
    static const std::vector<std::string> text_keys = {"potential.family", "experiment.kind", "experiment.label",
                                                       "numerics.study",  "numerics.target", "output.output_dir",
                                                       "numerics.accelerated", "numerics.bound_sweep"};
    return std::find(text_keys.begin(), text_keys.end(), key) == text_keys.end();
}

bool is_list_key(const std::string& key)
{
    return key.find("sequence") != std::string::npos;
}

}  // namespace

ExperimentConfig::ExperimentConfig()
{
    for (const Knob& k : knob_catalog()) values_[k.key] = k.default_value;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text, const std::string& origin)
{
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    ExperimentConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            // A key outside any section.
            throw ConfigError(origin + ": unknown config key '" + section + "'");
        }
        for (const auto& [key, node] : body) {
            if (!node.empty()) throw ConfigError(origin + ": nested key '" + section + "." + key + "'");
            cfg.set(section + "." + key, node.data());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
}

void ExperimentConfig::set(const std::string& key, const std::string& raw)
{
    if (!find_knob(key)) throw ConfigError("unknown config key '" + key + "'");
    const std::string v = trim(raw);
    if (is_numeric_key(key)) {
        if (is_list_key(key)) {
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!trim(item).empty()) parse_number(key, trim(item));
        } else {
            parse_number(key, v);
        }
    }
    if (key == "numerics.accelerated" || key == "numerics.bound_sweep") {
        if (v != "true" && v != "false") throw ConfigError("config key '" + key + "': expected true or false");
    }
    values_[key] = v;
}

void ExperimentConfig::validate() const
{
    const std::string kind = text("experiment.kind");
    if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), kind) == kExperimentKinds.end())
        throw ConfigError("config key 'experiment.kind': unknown experiment '" + kind + "'");
    const std::string fam = text("potential.family");
    static const std::vector<std::string> families = {"free", "square_well", "woods_saxon", "pure_coulomb"};
    if (std::find(families.begin(), families.end(), fam) == families.end())
        throw ConfigError("config key 'potential.family': unknown family '" + fam + "'");
    if (!(number("potential.R0_length") > 0)) throw ConfigError("config key 'potential.R0_length': must be positive");
    if (integer("output.workers") < 0) throw ConfigError("config key 'output.workers': must be non-negative");
}

std::string ExperimentConfig::text(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double ExperimentConfig::number(const std::string& key) const { return parse_number(key, text(key)); }

int ExperimentConfig::integer(const std::string& key) const
{
    const double x = number(key);
    if (x != std::floor(x)) throw ConfigError("config key '" + key + "': expected an integer");
    return static_cast<int>(x);
}

bool ExperimentConfig::flag(const std::string& key) const { return text(key) == "true"; }

std::vector<double> ExperimentConfig::numbers(const std::string& key) const
{
    std::vector<double> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(parse_number(key, trim(item)));
    return out;
}

std::string ExperimentConfig::effective_ini() const
{
    std::ostringstream out;
    std::string section;
    for (const Knob& k : knob_catalog()) {
        const auto dot = k.key.find('.');
        const std::string s = k.key.substr(0, dot);
        if (s != section) {
            if (!section.empty()) out << "\n";
            out << "[" << s << "]\n";
            section = s;
        }
        out << k.key.substr(dot + 1) << " = " << values_.at(k.key) << "\n";
    }
    return out.str();
}

PotentialSpec build_potential(const ExperimentConfig& cfg)
{
    const std::string fam = cfg.text("potential.family");
    const double ell = cfg.number("potential.ell");
    const double R0 = cfg.number("potential.R0_length");
    const double Vc = cfg.number("potential.Vc_strength");
    const double depth = cfg.number("potential.depth_energy");
    PotentialSpec spec;
    if (fam == "free") {
        spec = free_particle(ell, R0);
        if (Vc != 0) throw ConfigError("config key 'potential.Vc_strength': the free family has no Coulomb tail");
    } else if (fam == "square_well") {
        spec = square_well(depth, R0, Vc, ell);
    } else if (fam == "woods_saxon") {
        spec = woods_saxon(depth, cfg.number("potential.ws_radius_length"),
                           cfg.number("potential.ws_diffuseness_length"), R0, Vc, ell);
    } else {
        spec = pure_coulomb(Vc, ell, R0);
    }
    const double w = cfg.number("potential.nonlocal_strength_energy");
    if (w != 0.0)
        spec = composite({spec, gaussian_nonlocal(w, cfg.number("potential.nonlocal_width_length"), R0, ell, Vc)});
    return spec;
}

}  // namespace complab
