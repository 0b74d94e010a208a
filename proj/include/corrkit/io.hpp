#pragma once

// JSON descriptors. Complex numbers are [re, im] pairs (a bare number is real),
// matrices are arrays of rows, elements are arrays of block matrices.

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "corrkit/analysis.hpp"
#include "corrkit/cpdict.hpp"
#include "corrkit/sigmafin.hpp"
#include "corrkit/statial.hpp"

namespace corrkit::io {

using nlohmann::json;

/// Malformed or unreadable input.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_file(const std::string& path);
/// Parses text, reporting line and column of syntax errors.
json parse_text(const std::string& text, const std::string& origin);

cd to_complex(const json& j);
VectorXcd to_vector(const json& j);
MatrixXcd to_matrix(const json& j);
TracialAlgebra to_algebra(const json& j);
Element to_element(const TracialAlgebra& alg, const json& j);
Correspondence to_correspondence(const json& j);
VectorSequence to_sequence(const json& j);
CPMap to_cp_map(const json& j);
FaithfulState to_state(const json& j);
StatialFamily to_family(const json& j);

json from_complex(cd z);
json from_vector(const VectorXcd& v);
json from_vector(const VectorXd& v);
json from_matrix(const MatrixXcd& m);
json from_algebra(const TracialAlgebra& alg);
json from_element(const Element& x);
json from_certificate(const BoundCertificate& c);
json from_correspondence(const Correspondence& c);

}  // namespace corrkit::io
