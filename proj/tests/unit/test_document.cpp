#include <doctest.h>

#include <fstream>
#include <sstream>

#include "naimark_lab/document.hpp"
#include "naimark_lab/measurements.hpp"

using namespace naimark_lab;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream f(std::string(NAIMARK_LAB_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string error_path(const std::string& text) {
  try {
    parse_document(text);
  } catch (const DocumentError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("shorthand expands to unsharp spins") {
  const PovmDocument doc = parse_document(read_fixture("unsharp_pair.json"));
  CHECK(doc.dim == 2);
  REQUIRE(doc.observables.size() == 2);
  const ObservableSpec* sy = doc.find("Sy");
  REQUIRE(sy != nullptr);
  CHECK(sy->kind == ObservableKind::unsharp_spin);
  CHECK(sy->axis_label == 'y');
  const auto effects = sy->expand(2);
  const Povm expected = unsharp_spin(UnsharpSpin(kAxisY, 0.5));
  REQUIRE(effects.size() == 2);
  for (int k = 0; k < 2; ++k) CHECK(frobenius_norm(effects[static_cast<size_t>(k)] - expected[k]) <= 1e-15);
  CHECK(doc.find("Sz") == nullptr);

  const PovmDocument trio = parse_document(read_fixture("trio_joint.json"));
  CHECK(trio.observables.front().expand(2).size() == 8);
}

TEST_CASE("serialization round-trips byte for byte") {
  for (const char* name : {"unsharp_pair.json", "trio.json", "trio_joint.json", "sharp_z.json", "incomplete.json"}) {
    CAPTURE(name);
    const std::string once = serialize_document(parse_document(read_fixture(name)));
    const std::string twice = serialize_document(parse_document(once));
    CHECK(once == twice);
  }

  PovmDocument doc;
  doc.dim = 2;
  ObservableSpec spec;
  spec.name = "E";
  spec.effects = {ComplexMatrix::Identity(2, 2) * 0.1, ComplexMatrix::Identity(2, 2) * 0.9};
  spec.effects[0](0, 1) = Complex(1.0 / 3.0, -0.2);
  spec.effects[0](1, 0) = Complex(1.0 / 3.0, 0.2);
  doc.observables.push_back(spec);
  doc.metadata = {{"source", "test"}};
  const PovmDocument back = parse_document(serialize_document(doc));
  CHECK(back.observables.front().effects[0] == spec.effects[0]);
  CHECK(back.metadata == doc.metadata);
}

TEST_CASE("parse errors carry a field path") {
  CHECK(error_path(read_fixture("malformed.json")) == "observables[0].effects[1][1][1][0]");
  CHECK(error_path(R"({"schema_version":"2","dim":2,"observables":[]})") == "schema_version");
  CHECK(error_path(R"({"schema_version":"1","dim":0,"observables":[]})") == "dim");
  CHECK(error_path(R"({"schema_version":"1","dim":2,"observables":[],"extra":1})") == "extra");
  CHECK(error_path(R"({"schema_version":"1","dim":3,"observables":[
      {"name":"s","unsharp_spin":{"axis":"x","lambda":0.5}}]})") == "observables[0]");
  CHECK(error_path(R"({"schema_version":"1","dim":2,"observables":[
      {"name":"s","unsharp_spin":{"axis":"x","lambda":0.5}},
      {"name":"s","unsharp_spin":{"axis":"y","lambda":0.5}}]})") == "observables[1].name");
  CHECK(error_path(R"({"schema_version":"1","dim":2,"observables":[
      {"name":"s","effects":[[[[1,0]]]]}]})") == "observables[0].effects[0]");
  CHECK_THROWS_AS(parse_document("{not json"), DocumentError);
  CHECK_THROWS_AS(load_document("/nonexistent/file.json"), DocumentError);
}
