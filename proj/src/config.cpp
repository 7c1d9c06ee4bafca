#include "ganlab/config.hpp"

#include <fstream>
#include <sstream>

#include "ganlab/errors.hpp"

namespace ganlab::exp {

AttackMode attack_mode_from_string(const std::string& s) {
    if (s == "whitebox") return AttackMode::Whitebox;
    if (s == "blackbox") return AttackMode::Blackbox;
    if (s == "both") return AttackMode::Both;
    throw ConfigError("unknown attack mode: " + s);
}

std::string attack_mode_to_string(AttackMode m) {
    switch (m) {
        case AttackMode::Whitebox: return "whitebox";
        case AttackMode::Blackbox: return "blackbox";
        case AttackMode::Both: return "both";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    }
}

std::size_t parse_size(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size() || x < 0) throw std::invalid_argument(v);
        return static_cast<std::size_t>(x);
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ConfigError("bad boolean value for " + key + ": '" + v + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& v) {
    std::vector<std::size_t> out;
    for (const std::string& item : split_list(v)) out.push_back(parse_size(key, item));
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

}  // namespace

void apply_override(ExperimentConfig& c, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "dataset") {
        if (v != "ring" && v != "patterns" && v.rfind("folder:", 0) != 0) {
            throw ConfigError("dataset must be ring, patterns, or folder:<path>");
        }
        c.dataset = v;
    } else if (key == "samples") {
        c.samples = parse_size(key, v);
    } else if (key == "train_fraction") {
        c.train_fraction = parse_double(key, v);
    } else if (key == "ring_modes") {
        c.ring_modes = parse_size(key, v);
    } else if (key == "ring_radius") {
        c.ring_radius = parse_double(key, v);
    } else if (key == "ring_stddev") {
        c.ring_stddev = parse_double(key, v);
    } else if (key == "pattern_classes") {
        c.pattern_classes = parse_size(key, v);
    } else if (key == "pattern_side") {
        c.pattern_side = parse_size(key, v);
    } else if (key == "pattern_jitter") {
        c.pattern_jitter = parse_double(key, v);
    } else if (key == "image_side") {
        c.image_side = parse_size(key, v);
    } else if (key == "strategies") {
        c.strategies.clear();
        for (const std::string& s : split_list(v)) {
            c.strategies.push_back(gan::strategy_from_string(s));
        }
        if (c.strategies.empty()) throw ConfigError("strategies list is empty");
    } else if (key == "objectives") {
        c.objectives.clear();
        for (const std::string& s : split_list(v)) {
            c.objectives.push_back(gan::objective_from_string(s));
        }
        if (c.objectives.empty()) throw ConfigError("objectives list is empty");
    } else if (key == "seeds") {
        c.seeds.clear();
        for (const std::string& s : split_list(v)) {
            c.seeds.push_back(static_cast<std::uint64_t>(parse_size(key, s)));
        }
        if (c.seeds.empty()) throw ConfigError("seeds list is empty");
    } else if (key == "epochs") {
        c.epochs = parse_size(key, v);
    } else if (key == "batch") {
        c.batch = parse_size(key, v);
    } else if (key == "checkpoint_every") {
        c.checkpoint_every = parse_size(key, v);
    } else if (key == "noise_dim") {
        c.noise_dim = parse_size(key, v);
    } else if (key == "d_hidden") {
        c.d_hidden = parse_size_list(key, v);
    } else if (key == "g_hidden") {
        c.g_hidden = parse_size_list(key, v);
    } else if (key == "d_steps") {
        c.d_steps = static_cast<int>(parse_size(key, v));
    } else if (key == "non_saturating") {
        c.non_saturating = parse_bool(key, v);
    } else if (key == "lr") {
        c.lr_override = parse_double(key, v);
    } else if (key == "beta1") {
        c.beta1_override = parse_double(key, v);
    } else if (key == "noise_prior") {
        if (v != "normal" && v != "uniform") throw ConfigError("noise_prior: normal|uniform");
        c.noise_prior = v;
    } else if (key == "attack") {
        c.attack = attack_mode_from_string(v);
    } else if (key == "aux_fraction") {
        c.aux_fraction = parse_double(key, v);
    } else if (key == "classifier_iters") {
        c.classifier_iters = parse_size(key, v);
    } else if (key == "sample_count") {
        c.sample_count = parse_size(key, v);
    } else if (key == "eps_grid") {
        c.eps_grid.clear();
        for (const std::string& s : split_list(v)) c.eps_grid.push_back(parse_double(key, s));
    } else if (key == "audit_h_size") {
        c.audit_h_size = parse_size(key, v);
    } else if (key == "audit_m") {
        c.audit_m = parse_size(key, v);
    } else if (key == "chain_runs") {
        c.chain_runs = parse_size(key, v);
    } else if (key == "uc_runs") {
        c.uc_runs = parse_size(key, v);
    } else if (key == "uc_steps") {
        c.uc_steps = parse_size(key, v);
    } else if (key == "uc_m") {
        c.uc_m = parse_size(key, v);
    } else if (key == "uc_checkpoint_every") {
        c.uc_checkpoint_every = parse_size(key, v);
    } else if (key == "uc_clip") {
        c.uc_clip = parse_double(key, v);
    } else if (key == "uc_noise") {
        c.uc_noise = parse_double(key, v);
    } else if (key == "uc_lr") {
        c.uc_lr = parse_double(key, v);
    } else if (key == "out") {
        c.out_dir = v;
    } else if (key == "workers") {
        c.workers = parse_size(key, v);
    } else if (key == "seed") {
        c.master_seed = static_cast<std::uint64_t>(parse_size(key, v));
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        apply_override(c, key, value);
    }
    return c;
}

gan::TrainConfig ExperimentConfig::train_config(gan::Strategy s, gan::Objective o,
                                                std::uint64_t seed) const {
    gan::TrainConfig t = gan::TrainConfig::make(s, o);
    t.batch = batch;
    t.epochs = epochs;
    t.seed = seed;
    t.checkpoint_every = checkpoint_every;
    t.non_saturating = non_saturating;
    t.noise = gan::NoisePrior{noise_prior == "normal"
                                  ? gan::NoisePrior::Kind::StandardNormal
                                  : gan::NoisePrior::Kind::Uniform,
                              noise_dim};
    t.d_hidden = d_hidden;
    t.g_hidden = g_hidden;
    if (d_steps > 0) t.d_steps_per_g = d_steps;
    if (lr_override > 0.0) t.adam.lr = lr_override;
    if (beta1_override >= 0.0) t.adam.beta1 = beta1_override;
    return t;
}

}  // namespace ganlab::exp
