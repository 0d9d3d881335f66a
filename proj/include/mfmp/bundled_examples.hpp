#pragma once

#include <string>
#include <vector>

namespace mfmp {

struct BundledExample {
    std::string name;     // file stem, e.g. "ex1_scenario1"
    std::string content;  // JSON document
};

// Ready-to-run column specifications shipped with the tool.
const std::vector<BundledExample>& bundled_examples();

// Writes every bundled example (and the format notes) into `dir`.
void write_bundled_examples(const std::string& dir);

}  // namespace mfmp
