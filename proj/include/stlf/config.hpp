#pragma once

#include "stlf/attack.hpp"
#include "stlf/features.hpp"
#include "stlf/ingest.hpp"
#include "stlf/similarity.hpp"
#include "stlf/synth.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stlf {

/// Everything a CLI run can be told. Text form is one `key = value` per
/// line, `#` starts a comment; see RunConfig::keys() for the accepted keys.
struct RunConfig {
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    bool verbose = false;

    std::string dataset_dir;  // holds load.csv and temperature.csv
    std::string load_file;
    std::string temperature_file;
    std::vector<std::string> zones;  // empty = every zone in the dataset
    std::vector<ModelKind> models{ModelKind::F1, ModelKind::F2};
    double split_ratio = 0.7;
    DesignOptions design;

    SynthConfig synth;
    CleanOptions clean;
    similarity::SimilarityParams similarity;

    AttackSpec attack;  // target_zone empty = first selected zone
    ModelKind attack_model = ModelKind::F2;

    double tau = 3.0;
    std::size_t vote_k = 1;
    std::size_t trials = 50;
    std::size_t window = 168;
    std::size_t windows = 50;
    std::string reference_zone;  // empty = first selected zone other than the target

    /// Throws InvalidArgument naming the key on an unknown key or a bad value.
    void set(const std::string& key, const std::string& value);
    void apply_text(const std::string& content, const std::string& origin = "config");
    /// Reads a file into apply_text; a missing file is an Io error naming the path.
    void apply_file(const std::string& path);

    static const std::vector<std::string>& keys();
};

}  // namespace stlf
