#include "ppmor/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ppmor {

namespace {

using nlohmann::json;

Matrix read_matrix(const json& doc, const char* key, Index rows, Index cols) {
  if (!doc.contains(key)) throw InvalidInput(std::string("model file: missing key ") + key);
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw InvalidInput(std::string("model file: ") + key + " must be an array of rows");
  Matrix out(rows, cols);
  if (rows == 0) {
    if (!arr.empty()) throw InvalidInput(std::string("model file: ") + key + " must be empty");
    return out;
  }
  if (static_cast<Index>(arr.size()) != rows) {
    throw InvalidInput(std::string("model file: ") + key + " has " + std::to_string(arr.size()) +
                       " rows, expected " + std::to_string(rows));
  }
  for (Index i = 0; i < rows; ++i) {
    const json& row = arr[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw InvalidInput(std::string("model file: row ") + std::to_string(i) + " of " + key + " must have " +
                         std::to_string(cols) + " entries");
    }
    for (Index j = 0; j < cols; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw InvalidInput(std::string("model file: non-numeric entry in ") + key);
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw InvalidInput(std::string("model file: non-finite entry in ") + key);
      out(i, j) = x;
    }
  }
  return out;
}

nlohmann::ordered_json write_matrix(const Matrix& m) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    arr.push_back(std::move(row));
  }
  return arr;
}

Index read_dim(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer()) {
    throw InvalidInput(std::string("model file: ") + key + " must be a non-negative integer");
  }
  const auto v = doc.at(key).get<long long>();
  if (v < 0) throw InvalidInput(std::string("model file: ") + key + " must be a non-negative integer");
  return static_cast<Index>(v);
}

}  // namespace

ModelFile parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("model file: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("model file: top level must be an object");
  const Index n = read_dim(doc, "n");
  const Index m = read_dim(doc, "m");
  ModelFile out;
  out.model = StateSpaceModel(read_matrix(doc, "A", n, n), read_matrix(doc, "B", n, m), read_matrix(doc, "C", m, n),
                              read_matrix(doc, "D", m, m));

  const char* keys[] = {"J", "R", "Q", "G", "P", "N", "S"};
  int present = 0;
  for (const char* k : keys) present += doc.contains(k) ? 1 : 0;
  if (present == 0) return out;
  if (present != 7) throw InvalidInput("model file: port-Hamiltonian block needs all of J, R, Q, G, P, N, S");
  out.ph = PortHamiltonianModel(read_matrix(doc, "J", n, n), read_matrix(doc, "R", n, n), read_matrix(doc, "Q", n, n),
                                read_matrix(doc, "G", n, m), read_matrix(doc, "P", n, m), read_matrix(doc, "N", m, m),
                                read_matrix(doc, "S", m, m));
  const StateSpaceModel check = ph_to_statespace(*out.ph);
  const auto differs = [](const Matrix& x, const Matrix& y) {
    return (x - y).norm() > 1e-10 * std::max(1.0, y.norm());
  };
  if (differs(check.A, out.model.A) || differs(check.B, out.model.B) || differs(check.C, out.model.C) ||
      differs(check.D, out.model.D)) {
    throw InvalidInput("model file: port-Hamiltonian blocks do not match A, B, C, D");
  }
  return out;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string dump_model(const StateSpaceModel& model, const PortHamiltonianModel* ph) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["n"] = model.n();
  doc["m"] = model.m();
  doc["A"] = write_matrix(model.A);
  doc["B"] = write_matrix(model.B);
  doc["C"] = write_matrix(model.C);
  doc["D"] = write_matrix(model.D);
  if (ph != nullptr) {
    doc["J"] = write_matrix(ph->J);
    doc["R"] = write_matrix(ph->R);
    doc["Q"] = write_matrix(ph->Q);
    doc["G"] = write_matrix(ph->G);
    doc["P"] = write_matrix(ph->P);
    doc["N"] = write_matrix(ph->N);
    doc["S"] = write_matrix(ph->S);
  }
  return doc.dump(1) + "\n";
}

void write_model_file(const std::string& path, const StateSpaceModel& model, const PortHamiltonianModel* ph) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write model file " + path);
  out << dump_model(model, ph);
  if (!out) throw InvalidInput("failed writing model file " + path);
}

}  // namespace ppmor
