#pragma once

#include "chaintr/io/model_io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chaintr {

// One moment request: genus and one power per argument, written "g:p1,p2,...".
struct MomentRequest {
    int g = 0;
    std::vector<int> powers;
};

MomentRequest parse_moment_request(const std::string& s);

struct RunSpec {
    std::string command;     // curve | correlators | free-energy | check | derive
    std::string model_path;
    int gmax = 2, nmax = 1;  // gmax <= 5, nmax <= 4
    std::optional<RingSpec> ring;    // overrides the model file; float when neither is set
    std::optional<Gauge> gauge;
    std::string out_path;            // empty: standard output
    double tol = 1e-8;               // sheet sums and the symplectic comparison
    double fd_step = 1e-4;           // central differences in `check`
    double fd_tol = 1e-6;
    bool terms = false;              // `correlators`: list every pole term
    std::vector<MomentRequest> moments;
    std::vector<std::string> params; // `derive`; `check` uses its own default set
    bool check_sheets = true, check_variations = true, check_symplectic = true;
};

// The result document of one run. Throws ChainError; a failed `check`
// still returns its document, with "pass": false.
Json run_document(const RunSpec& spec, const ModelFile& file);

// Reads the model, runs, writes the document and maps errors to exit codes.
int run(const RunSpec& spec, std::ostream& err);

}  // namespace chaintr
