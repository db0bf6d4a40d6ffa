#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "gdpq/gen.hpp"
#include "gdpq/io.hpp"

namespace gdpq {

/// Constrained-layout instance data file:
/// {
///   "name": "...", "provenance": "...",
///   "rectangles": [[length, height], ...],
///   "circles": [[x, y, r], ...],
///   "costs": [[i, j, cost], ...],
///   "x_bounds": [[lo, hi], ...], "y_bounds": [[lo, hi], ...],
///   "norm": "l1" | "l2"
/// }
inline ClayInstance read_clay_instance(const std::string& text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  const io_detail::Cursor root{&parsed, ""};
  root.allow_only({"name", "provenance", "rectangles", "circles", "costs",
                   "x_bounds", "y_bounds", "norm"});
  ClayInstance inst;
  inst.name = root.child("name").text();
  const io_detail::Cursor rects = root.child("rectangles");
  rects.require_array();
  for (std::size_t i = 0; i < rects.self().size(); ++i) {
    const auto r = rects.at(i);
    r.require_array();
    if (r.self().size() != 2) throw SchemaError(r.path, "expected [length, height]");
    inst.rectangles.push_back({r.at(0).number(), r.at(1).number()});
  }
  const io_detail::Cursor circles = root.child("circles");
  circles.require_array();
  for (std::size_t i = 0; i < circles.self().size(); ++i) {
    const auto c = circles.at(i);
    c.require_array();
    if (c.self().size() != 3) throw SchemaError(c.path, "expected [x, y, r]");
    inst.circles.push_back({c.at(0).number(), c.at(1).number(), c.at(2).number()});
  }
  const io_detail::Cursor costs = root.child("costs");
  costs.require_array();
  for (std::size_t i = 0; i < costs.self().size(); ++i) {
    const auto c = costs.at(i);
    c.require_array();
    if (c.self().size() != 3) throw SchemaError(c.path, "expected [i, j, cost]");
    const int a = static_cast<int>(c.at(0).integer());
    const int b = static_cast<int>(c.at(1).integer());
    if (a >= b) throw SchemaError(c.path, "cost keys must satisfy i < j");
    inst.costs[{a, b}] = c.at(2).number();
  }
  auto read_bounds = [&](const char* key) {
    std::vector<std::pair<double, double>> out;
    const io_detail::Cursor b = root.child(key);
    b.require_array();
    for (std::size_t i = 0; i < b.self().size(); ++i) {
      const auto p = b.at(i);
      p.require_array();
      if (p.self().size() != 2) throw SchemaError(p.path, "expected [lo, hi]");
      out.push_back({p.at(0).number(), p.at(1).number()});
    }
    return out;
  };
  inst.x_bounds = read_bounds("x_bounds");
  inst.y_bounds = read_bounds("y_bounds");
  const std::string norm = root.child("norm").text();
  if (norm == "l1") {
    inst.norm = ClayNorm::L1;
  } else if (norm == "l2") {
    inst.norm = ClayNorm::L2;
  } else {
    throw SchemaError("/norm", "expected \"l1\" or \"l2\"");
  }
  return inst;
}

inline ClayInstance read_clay_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_clay_instance(buffer.str());
}

}  // namespace gdpq
