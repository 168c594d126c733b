#pragma once

#include <map>
#include <string>

#include "nrs/fse.hpp"
#include "nrs/motion.hpp"

namespace nrs {

// Flat key-value text: one `key = value` per line, '#' comments allowed.
// std::map keeps writes sorted and therefore byte-stable.
using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap read_config(const std::string& path);
void write_config(const KeyValueMap& kv, const std::string& path);

// Applies the recognized reconstruction keys; unknown keys are left alone so
// a full run manifest can double as a config file. Returns the number of
// keys consumed.
int apply_config(const KeyValueMap& kv, FseParams& fse, MotionParams& motion,
                 int* margin = nullptr);

// The reconstruction parameters as config keys.
KeyValueMap to_config(const FseParams& fse, const MotionParams& motion, int margin);

}  // namespace nrs
