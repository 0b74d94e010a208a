#include "corrkit/io.hpp"

#include <fstream>
#include <sstream>

namespace corrkit::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Index to_index(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<Index>();
}

}  // namespace

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON");
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

cd to_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("expected a number or [re, im] pair");
}

VectorXcd to_vector(const json& j) {
  if (j.is_object() && j.contains("vector")) return to_vector(j.at("vector"));
  if (!j.is_array()) throw InputError("expected a vector");
  VectorXcd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = to_complex(j[i]);
  return v;
}

MatrixXcd to_matrix(const json& j) {
  if (!j.is_array()) throw InputError("expected a matrix (array of rows)");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
  MatrixXcd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Index>(j[r].size()) != cols)
      throw InputError("matrix rows have unequal lengths");
    for (Index c = 0; c < cols; ++c) m(r, c) = to_complex(j[r][c]);
  }
  return m;
}

TracialAlgebra to_algebra(const json& j) {
  std::vector<Index> blocks;
  for (const auto& b : field(j, "blocks")) blocks.push_back(to_index(b, "block size"));
  try {
    if (j.contains("weights")) {
      std::vector<double> weights;
      for (const auto& w : j.at("weights")) weights.push_back(w.get<double>());
      return TracialAlgebra(blocks, weights);
    }
    return TracialAlgebra::markov(blocks);
  } catch (const json::exception& e) {
    throw InputError(std::string("algebra: ") + e.what());
  }
}

Element to_element(const TracialAlgebra& alg, const json& j) {
  const json& blocks = j.is_object() ? field(j, "blocks") : j;
  if (!blocks.is_array()) throw InputError("expected an element (array of block matrices)");
  Element x;
  for (const auto& b : blocks) x.blocks.push_back(to_matrix(b));
  if (!belongs_to(alg, x)) throw InputError("element does not match the algebra's block sizes");
  return x;
}

Correspondence to_correspondence(const json& j) {
  if (j.contains("builder")) {
    const auto builder = j.at("builder").get<std::string>();
    if (builder == "trivial") return trivial_correspondence(to_algebra(field(j, "algebra")));
    if (builder == "coarse")
      return coarse_correspondence(to_algebra(field(j, "left_algebra")),
                                   to_algebra(field(j, "right_algebra")));
    if (builder == "irreducible")
      return irreducible_correspondence(to_algebra(field(j, "left_algebra")),
                                        to_algebra(field(j, "right_algebra")),
                                        to_index(field(j, "left_block"), "left_block"),
                                        to_index(field(j, "right_block"), "right_block"));
    if (builder == "direct_sum") {
      std::vector<Correspondence> parts;
      for (const auto& p : field(j, "parts")) parts.push_back(to_correspondence(p));
      std::vector<Index> mult(parts.size(), 1);
      if (j.contains("multiplicities")) {
        mult.clear();
        for (const auto& m : j.at("multiplicities")) mult.push_back(to_index(m, "multiplicity"));
      }
      return direct_sum(parts, mult);
    }
    throw InputError("unknown correspondence builder \"" + builder + "\"");
  }
  const TracialAlgebra left = to_algebra(field(j, "left_algebra"));
  const TracialAlgebra right = to_algebra(field(j, "right_algebra"));
  const Index dim = to_index(field(j, "dim"), "dim");
  std::vector<MatrixXcd> lrep, rrep;
  for (const auto& m : field(j, "left_rep")) lrep.push_back(to_matrix(m));
  for (const auto& m : field(j, "right_rep")) rrep.push_back(to_matrix(m));
  return Correspondence(left, right, dim, std::move(lrep), std::move(rrep));
}

VectorSequence to_sequence(const json& j) {
  VectorSequence s;
  for (const auto& t : field(j, "terms")) s.terms.push_back(to_vector(t));
  if (j.contains("limit") && !j.at("limit").is_null()) s.limit = to_vector(j.at("limit"));
  return s;
}

CPMap to_cp_map(const json& j) {
  return CPMap(to_algebra(field(j, "source")), to_algebra(field(j, "target")),
               to_matrix(field(j, "action")));
}

FaithfulState to_state(const json& j) {
  const TracialAlgebra alg = to_algebra(field(j, "algebra"));
  return FaithfulState(alg, to_element(alg, field(j, "density")));
}

StatialFamily to_family(const json& j) {
  const TracialAlgebra alg = to_algebra(field(j, "algebra"));
  std::vector<Element> d;
  for (const auto& e : field(j, "densities")) d.push_back(to_element(alg, e));
  const bool full = j.contains("full_closure") && j.at("full_closure").get<bool>();
  return StatialFamily(alg, std::move(d), full);
}

json from_complex(cd z) { return json::array({z.real(), z.imag()}); }

json from_vector(const VectorXcd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(from_complex(v(i)));
  return out;
}

json from_vector(const VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json from_matrix(const MatrixXcd& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(from_complex(m(r, c)));
    out.push_back(row);
  }
  return out;
}

json from_algebra(const TracialAlgebra& alg) {
  return {{"blocks", alg.blocks()}, {"weights", alg.weights()}};
}

json from_element(const Element& x) {
  json out = json::array();
  for (const auto& b : x.blocks) out.push_back(from_matrix(b));
  return out;
}

json from_certificate(const BoundCertificate& c) {
  return {{"b_left", from_element(c.b_left)},
          {"d_right", from_element(c.d_right)},
          {"K_left", c.K_left},
          {"K_right", c.K_right},
          {"bound", c.bound()}};
}

json from_correspondence(const Correspondence& c) {
  json l = json::array(), r = json::array();
  for (const auto& m : c.left_rep()) l.push_back(from_matrix(m));
  for (const auto& m : c.right_rep()) r.push_back(from_matrix(m));
  return {{"left_algebra", from_algebra(c.left_alg())},
          {"right_algebra", from_algebra(c.right_alg())},
          {"dim", c.dim()},
          {"left_rep", l},
          {"right_rep", r}};
}

}  // namespace corrkit::io
