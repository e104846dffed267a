#pragma once

#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twistvo/automorphism.hpp"
#include "twistvo/twisted_module.hpp"

namespace twistvo {

struct ModelParseError : EngineError {
  using EngineError::EngineError;
};

// Text description of an algebra, one automorphism, and optionally a
// twisted module or the nilpotent toy. See models/*.model for the format.
struct ModelDesc {
  struct GenDesc {
    std::string name;
    int parity = 0;
    Exponent weight;
  };
  struct Entry {
    std::string row, col;
    Scalar value;
  };
  struct Term {
    Scalar coef;
    std::string word;  // e.g. psi(-3/2)psi(-1/2)
  };
  struct ModuleDesc {
    std::string name;
    std::vector<std::pair<std::string, int>> vacua;
    std::vector<Entry> gram;  // empty means: same form as the algebra
    std::vector<std::pair<std::string, Entry>> zero;  // generator, matrix entry on the vacuum space
    std::vector<Entry> gvac;                           // g on the vacuum space, identity if empty
  };

  std::string name;
  std::string kind;  // fermion | heisenberg
  int level = 8;
  std::vector<GenDesc> gens;
  std::vector<Entry> gram;
  std::vector<Term> conformal;
  std::string automorphism = "identity";
  std::vector<Entry> g;  // g(col) = sum_row value * row
  std::optional<ModuleDesc> module;
  bool toy = false;
};

Scalar parse_scalar(const std::string& s);
Exponent parse_exponent(const std::string& s);
ModelDesc parse_model(std::istream& in);
ModelDesc load_model(const std::string& path);
std::string serialize_model(const ModelDesc& d);

// The shipped models as built-in descriptions.
ModelDesc free_fermion_desc();
ModelDesc heisenberg_desc(const std::vector<std::string>& names, const std::vector<std::vector<Q>>& gram);
ModelDesc boson1_desc();
ModelDesc heis3_unipotent_desc();

// Single-sign faults used by the mutation suite.
struct Mutation {
  std::string id;
  std::string model;  // which shipped model it applies to
  std::string description;
};
std::vector<Mutation> mutation_catalog();
// Returns the mutated description, with engine switches set in *faults.
ModelDesc apply_mutation(const ModelDesc& d, const std::string& id, EngineFaults* faults);

struct BuildOptions {
  Exponent jordan_cutoff = Exponent(2);
  bool require_isometry = true;
  EngineFaults faults;
};

struct Model {
  ModelDesc desc;
  std::shared_ptr<const FockSpace> V;
  std::shared_ptr<const VertexEngine> YV;
  Vec omega;
  std::shared_ptr<const Automorphism> g;
  std::shared_ptr<const JordanDecomposition> jordan;
  LinearMap N;                                 // N_g on V from the generators; null when zero
  std::shared_ptr<const TwistedModule> module;  // null unless the model ships one
  std::shared_ptr<const TwistedModule> toy;     // x^{-N} Y_V x^{N} on V itself

  Vec generator(const std::string& name) const;
  // parse a PBW word like h(-2)h(-1) into a V vector
  Vec word(const std::string& w) const;
};

Model build_model(const ModelDesc& d, const BuildOptions& opt = {});

// Apply a mode word to a vector of the given space.
Vec apply_word(const FockSpace& F, const std::string& word, const Vec& v);
// Derivation of the mode algebra extending a linear map on the generators.
LinearMap derivation_from_generators(std::shared_ptr<const FockSpace> F, Matrix on_generators);

}  // namespace twistvo
