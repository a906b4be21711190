#pragma once

#include <stdexcept>
#include <string>

namespace dsim {

// Parameter/precondition violations use std::domain_error directly.
// The types below signal degenerate outcomes of otherwise valid inputs;
// the CLI maps them to exit code 3 (validation errors map to 2).

// A projection or filter removed all support from the state.
struct annihilation_error : std::runtime_error {
    explicit annihilation_error(const std::string& what) : std::runtime_error(what) {}
};

// A linear combination summed to the zero vector.
struct degenerate_input_error : std::runtime_error {
    explicit degenerate_input_error(const std::string& what) : std::runtime_error(what) {}
};

// State lies outside the requested decomposition family.
struct not_in_family_error : std::runtime_error {
    explicit not_in_family_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested filter retargeting crosses a SLOCC class boundary.
struct not_retargetable_error : std::runtime_error {
    explicit not_retargetable_error(const std::string& what) : std::runtime_error(what) {}
};

// Coincidence pattern matched no term of the expansion.
struct empty_postselection_error : std::runtime_error {
    explicit empty_postselection_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dsim
