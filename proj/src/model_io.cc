// Copyright 2026 The dpcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dpcausal/model_io.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

// Input iterator over a char buffer that publishes how far it has read, so
// the SAX callbacks can recover token positions.
class TrackingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator() = default;
  TrackingIterator(const char* p, const char** furthest) : p_(p), furthest_(furthest) {}

  reference operator*() const { return *p_; }
  TrackingIterator& operator++() {
    ++p_;
    if (furthest_ != nullptr && p_ > *furthest_) *furthest_ = p_;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const TrackingIterator& a, const TrackingIterator& b) {
    return a.p_ == b.p_;
  }

 private:
  const char* p_ = nullptr;
  const char** furthest_ = nullptr;
};

std::string EscapePointerToken(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

bool IsNumberChar(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
         c == '.' || c == 'e' || c == 'E';
}

class LocatingSax {
 public:
  LocatingSax(std::string_view text, const char** furthest, LocatedJson* out)
      : text_(text), furthest_(furthest), out_(out) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  bool null() { return Scalar(nullptr, Consumed() - 4); }
  bool boolean(bool v) { return Scalar(v, Consumed() - (v ? 4 : 5)); }
  bool number_integer(std::int64_t v) { return Scalar(v, NumberStart()); }
  bool number_unsigned(std::uint64_t v) { return Scalar(v, NumberStart()); }
  bool number_float(double, const std::string& raw) {
    const std::size_t start = NumberStart();
    std::string hint;
    if (auto exact = DecimalToRational(raw)) {
      hint = "; write the exact fraction \"" + FormatRational(*exact) + "\"";
    }
    throw Error(ErrorKind::kParse,
                "floating-point literal " + raw + " is not allowed" + hint,
                LocationAt(start));
  }
  bool string(std::string& v) { return Scalar(v, StringStart()); }
  bool binary(nlohmann::json::binary_t&) {
    throw Error(ErrorKind::kParse, "binary values are not allowed", LocationAt(Consumed()));
  }

  bool start_object(std::size_t) { return Open(OrderedJson::object()); }
  bool end_object() { return Close(); }
  bool start_array(std::size_t) { return Open(OrderedJson::array()); }
  bool end_array() { return Close(); }

  bool key(std::string& k) {
    Frame& frame = stack_.back();
    if (frame.value->contains(k)) {
      throw Error(ErrorKind::kParse, "duplicate key \"" + k + "\"",
                  LocationAt(StringStart()));
    }
    frame.key = k;
    return true;
  }

  bool parse_error(std::size_t position, const std::string& last_token,
                   const nlohmann::detail::exception& ex) {
    const std::size_t offset = position == 0 ? 0 : position - 1;
    std::string message = ex.what();
    // Drop the library's "[json.exception.parse_error.101] " prefix.
    if (const auto pos = message.find("] "); pos != std::string::npos) {
      message = message.substr(pos + 2);
    }
    // The location is reported separately.
    if (message.rfind("parse error at line", 0) == 0) {
      if (const auto pos = message.find(": "); pos != std::string::npos) {
        message = message.substr(pos + 2);
      }
    }
    if (!last_token.empty()) message += " (near '" + last_token + "')";
    throw Error(ErrorKind::kParse, message, LocationAt(std::min(offset, text_.size())));
  }

 private:
  struct Frame {
    OrderedJson* value;
    std::string pointer;
    std::string key;
  };

  std::size_t Consumed() const {
    return static_cast<std::size_t>(*furthest_ - text_.data());
  }

  // Numbers are read one character past their end.
  std::size_t NumberStart() const {
    std::size_t end = Consumed();
    if (end > 0 && !IsNumberChar(text_[end - 1])) --end;
    std::size_t start = end;
    while (start > 0 && IsNumberChar(text_[start - 1])) --start;
    return start;
  }

  // The opening quote: the last unescaped quote before the closing one.
  std::size_t StringStart() const {
    std::size_t j = Consumed() - 1;
    while (j > 0) {
      --j;
      if (text_[j] != '"') continue;
      std::size_t backslashes = 0;
      while (j >= backslashes + 1 && text_[j - backslashes - 1] == '\\') ++backslashes;
      if (backslashes % 2 == 0) return j;
    }
    return 0;
  }

  SourceLocation LocationAt(std::size_t offset) const {
    const auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    const std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    const std::size_t column = offset - line_starts_[line - 1] + 1;
    return SourceLocation{out_->source, static_cast<int>(line), static_cast<int>(column)};
  }

  // Places `value` in the current container and returns its address.
  OrderedJson* Place(OrderedJson value, std::size_t start, std::string* pointer) {
    if (stack_.empty()) {
      out_->root = std::move(value);
      *pointer = "";
      out_->locations[*pointer] = LocationAt(start);
      return &out_->root;
    }
    Frame& frame = stack_.back();
    OrderedJson* slot;
    if (frame.value->is_object()) {
      *pointer = frame.pointer + "/" + EscapePointerToken(frame.key);
      slot = &(*frame.value)[frame.key];
    } else {
      *pointer = frame.pointer + "/" + std::to_string(frame.value->size());
      frame.value->push_back(std::move(value));
      slot = &frame.value->back();
      out_->locations[*pointer] = LocationAt(start);
      return slot;
    }
    *slot = std::move(value);
    out_->locations[*pointer] = LocationAt(start);
    return slot;
  }

  template <typename T>
  bool Scalar(T&& v, std::size_t start) {
    std::string pointer;
    Place(OrderedJson(std::forward<T>(v)), start, &pointer);
    return true;
  }

  bool Open(OrderedJson container) {
    std::string pointer;
    OrderedJson* slot = Place(std::move(container), Consumed() - 1, &pointer);
    stack_.push_back(Frame{slot, pointer, ""});
    return true;
  }

  bool Close() {
    stack_.pop_back();
    return true;
  }

  std::string_view text_;
  const char** furthest_;
  LocatedJson* out_;
  std::vector<std::size_t> line_starts_;
  std::vector<Frame> stack_;
};

// ---------------------------------------------------------------------------
// Typed decoding.

[[noreturn]] void Fail(const LocatedJson& doc, const std::string& pointer,
                       ErrorKind kind, const std::string& message) {
  throw Error(kind, message, doc.Locate(pointer));
}

// A JSON node with its pointer, for error reporting.
struct Node {
  const LocatedJson* doc;
  const OrderedJson* json;
  std::string pointer;

  [[noreturn]] void Invalid(const std::string& message) const {
    Fail(*doc, pointer, ErrorKind::kValidation, message);
  }

  std::string Describe() const { return pointer.empty() ? "document" : "\"" + pointer + "\""; }

  const Node& ExpectObject() const {
    if (!json->is_object()) Invalid(Describe() + " must be an object");
    return *this;
  }
  const Node& ExpectArray() const {
    if (!json->is_array()) Invalid(Describe() + " must be an array");
    return *this;
  }

  // Rejects members outside `allowed`.
  void ExpectKeys(std::initializer_list<std::string_view> allowed) const {
    ExpectObject();
    for (const auto& item : json->items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        Child(item.key()).Invalid("unknown field \"" + item.key() + "\"");
      }
    }
  }

  Node Child(const std::string& key) const {
    return Node{doc, &(*json)[key], pointer + "/" + EscapePointerToken(key)};
  }

  bool Has(const std::string& key) const { return json->contains(key); }

  Node Field(const std::string& key) const {
    if (!json->contains(key)) Invalid("missing required field \"" + key + "\"");
    return Child(key);
  }

  std::optional<Node> OptionalField(const std::string& key) const {
    if (!json->contains(key)) return std::nullopt;
    return Child(key);
  }

  std::size_t size() const { return json->size(); }

  Node Item(std::size_t i) const {
    return Node{doc, &(*json)[i], pointer + "/" + std::to_string(i)};
  }

  std::vector<Node> Items() const {
    ExpectArray();
    std::vector<Node> out;
    for (std::size_t i = 0; i < json->size(); ++i) out.push_back(Item(i));
    return out;
  }

  std::string String() const {
    if (!json->is_string()) Invalid(Describe() + " must be a string");
    return json->get<std::string>();
  }

  int Int() const {
    if (!json->is_number_integer()) Invalid(Describe() + " must be an integer");
    const auto v = json->get<std::int64_t>();
    if (v < -1000000 || v > 1000000) Invalid(Describe() + " is out of range");
    return static_cast<int>(v);
  }

  Rational Rat() const {
    if (json->is_number_integer()) {
      Fail(*doc, pointer, ErrorKind::kParse,
           "rational must be a string \"p/q\"; write \"" +
               std::to_string(json->get<std::int64_t>()) + "/1\"");
    }
    if (!json->is_string()) Invalid(Describe() + " must be a rational string \"p/q\"");
    const std::string text = json->get<std::string>();
    try {
      return ParseRational(text);
    } catch (const Error& e) {
      if (auto exact = DecimalToRational(text)) {
        Fail(*doc, pointer, ErrorKind::kParse,
             "decimal \"" + text + "\" is not an exact rational; write \"" +
                 FormatRational(*exact) + "\"");
      }
      Fail(*doc, pointer, ErrorKind::kParse, e.what());
    }
  }

  RatioBound Ratio() const {
    if (json->is_string() && json->get<std::string>() == "inf") return RatioBound::Infinite();
    return RatioBound(Rat());
  }

  std::vector<std::string> Strings() const {
    std::vector<std::string> out;
    for (const Node& item : Items()) out.push_back(item.String());
    return out;
  }
};

// Runs `fn`, turning library errors into validation errors located at `node`.
template <typename Fn>
auto Guard(const Node& node, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse || e.kind() == ErrorKind::kValidation) throw;
    node.Invalid(std::string(ErrorKindName(e.kind())) + ": " + e.what());
  }
}

FiniteDomain DecodeDomain(const Node& node) {
  const std::vector<std::string> values = node.Strings();
  return Guard(node, [&] { return FiniteDomain(values); });
}

// Rows of a kernel table, with each row's sum checked here so the error
// points at the row.
std::vector<std::vector<Rational>> DecodeRows(const Node& node) {
  std::vector<std::vector<Rational>> rows;
  for (const Node& row_node : node.Items()) {
    std::vector<Rational> row;
    Rational sum = 0;
    for (const Node& entry : row_node.Items()) {
      row.push_back(entry.Rat());
      if (sgn(row.back()) < 0) entry.Invalid("negative probability " + FormatRational(row.back()));
      sum += row.back();
    }
    if (sum != 1) {
      row_node.Invalid("row sums to " + FormatRational(sum) + ", not 1");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Dist DecodeDistBody(const Node& node, std::initializer_list<std::string_view> extra_keys) {
  std::vector<std::string_view> allowed = {"variables", "weights"};
  allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
  node.ExpectObject();
  for (const auto& item : node.json->items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      node.Child(item.key()).Invalid("unknown field \"" + item.key() + "\"");
    }
  }
  std::vector<std::string> names;
  std::vector<FiniteDomain> domains;
  const Node variables = node.Field("variables");
  for (const Node& v : variables.Items()) {
    v.ExpectKeys({"name", "domain"});
    names.push_back(v.Field("name").String());
    domains.push_back(DecodeDomain(v.Field("domain")));
  }
  const Node weights = node.Field("weights");
  std::map<Assignment, Rational> table;
  if (weights.json->is_string()) {
    if (weights.String() != "uniform") {
      weights.Invalid("weights must be an array or the string \"uniform\"");
    }
    return Guard(node, [&] { return Dist::Uniform(names, domains); });
  }
  Rational sum = 0;
  for (const Node& w : weights.Items()) {
    w.ExpectKeys({"assignment", "p"});
    const Node assignment_node = w.Field("assignment");
    const std::vector<std::string> values = assignment_node.Strings();
    if (values.size() != names.size()) {
      assignment_node.Invalid("assignment has " + std::to_string(values.size()) +
                              " values for " + std::to_string(names.size()) + " variables");
    }
    Assignment a;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto idx = domains[k].Find(values[k]);
      if (!idx) {
        assignment_node.Item(k).Invalid("value \"" + values[k] + "\" is not in the domain of " +
                                        names[k]);
      }
      a.push_back(*idx);
    }
    const Rational p = w.Field("p").Rat();
    if (sgn(p) < 0) w.Field("p").Invalid("negative probability " + FormatRational(p));
    if (!table.emplace(a, p).second) assignment_node.Invalid("assignment listed twice");
    sum += p;
  }
  if (sum != 1) weights.Invalid("weights sum to " + FormatRational(sum) + ", not 1");
  return Guard(node, [&] { return Dist(names, domains, table); });
}

void FillDistJson(const Dist& dist, OrderedJson& out) {
  OrderedJson variables = OrderedJson::array();
  for (int k = 0; k < dist.num_variables(); ++k) {
    variables.push_back(OrderedJson{{"name", dist.names()[k]},
                                    {"domain", dist.domains()[k].values()}});
  }
  OrderedJson weights = OrderedJson::array();
  for (const auto& [a, p] : dist.weights()) {
    OrderedJson values = OrderedJson::array();
    for (int k = 0; k < dist.num_variables(); ++k) values.push_back(dist.domains()[k].value(a[k]));
    weights.push_back(OrderedJson{{"assignment", values}, {"p", FormatRational(p)}});
  }
  out["variables"] = std::move(variables);
  out["weights"] = std::move(weights);
}

OrderedJson RowsToJson(const std::vector<std::vector<Rational>>& rows) {
  OrderedJson out = OrderedJson::array();
  for (const auto& row : rows) {
    OrderedJson r = OrderedJson::array();
    for (const Rational& p : row) r.push_back(FormatRational(p));
    out.push_back(std::move(r));
  }
  return out;
}

// --- mechanisms -------------------------------------------------------------

std::string_view BuiltinParameterKey(std::string_view name) {
  if (name == "randomized_response") return "truth_bias";
  if (name == "geometric_count") return "ratio";
  return "";
}

BuiltinMechanism DecodeBuiltin(const Node& node) {
  BuiltinMechanism spec;
  const Node name = node.Field("builtin");
  spec.name = name.String();
  const std::string_view key = BuiltinParameterKey(spec.name);
  if (spec.name == "randomized_response" || spec.name == "geometric_count") {
    node.ExpectKeys({"builtin", "n", key});
    spec.n = node.Field("n").Int();
    spec.parameter = node.Field(std::string(key)).Rat();
  } else if (spec.name == "joint_hidden_value" || spec.name == "hidden_value") {
    node.ExpectKeys({"builtin", "n"});
    const int fixed = spec.name == "joint_hidden_value" ? 2 : 1;
    spec.n = fixed;
    if (auto n = node.OptionalField("n"); n && n->Int() != fixed) {
      n->Invalid(spec.name + " has n = " + std::to_string(fixed));
    }
  } else {
    name.Invalid("unknown builtin mechanism \"" + spec.name +
                 "\" (randomized_response, geometric_count, joint_hidden_value, "
                 "hidden_value)");
  }
  Guard(node, [&] { return BuildBuiltin(spec); });
  return spec;
}

MechanismKernel DecodeKernelTable(const Node& node) {
  node.ExpectKeys({"n", "data_domain", "null", "output_domain", "rows"});
  const int n = node.Field("n").Int();
  if (n < 1 || n > 8) node.Field("n").Invalid("n must be between 1 and 8");
  FiniteDomain data = DecodeDomain(node.Field("data_domain"));
  const Node null_node = node.Field("null");
  std::string null_value = null_node.String();
  if (!data.Find(null_value)) null_node.Invalid("null value \"" + null_value + "\" is not in data_domain");
  FiniteDomain output = DecodeDomain(node.Field("output_domain"));
  const Node rows_node = node.Field("rows");
  auto rows = DecodeRows(rows_node);
  long expected = 1;
  for (int i = 0; i < n; ++i) expected *= data.size();
  if (static_cast<long>(rows.size()) != expected) {
    rows_node.Invalid("expected " + std::to_string(expected) + " rows (one per database), got " +
                      std::to_string(rows.size()));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != output.size()) {
      rows_node.Item(r).Invalid("row has " + std::to_string(rows[r].size()) + " entries for " +
                                std::to_string(output.size()) + " outputs");
    }
  }
  return Guard(node, [&] {
    return MechanismKernel(n, std::move(data), std::move(null_value), std::move(output),
                           std::move(rows));
  });
}

AttributeEquation DecodeAttributeEquation(const Node& node) {
  node.ExpectKeys({"target", "parents", "rows"});
  AttributeEquation eq;
  eq.target = node.Field("target").String();
  eq.parents = node.Field("parents").Strings();
  eq.rows = DecodeRows(node.Field("rows"));
  return eq;
}

PopulationSpec DecodePopulation(const Node& node, const MechanismKernel& kernel) {
  node.ExpectKeys({"points", "attribute_equations", "exogenous"});
  PopulationSpec pop;
  if (auto points = node.OptionalField("points")) {
    if (node.Has("attribute_equations") || node.Has("exogenous")) {
      node.Invalid("a population has either \"points\" or \"exogenous\", not both");
    }
    pop.points = DecodeDistBody(*points, {});
    Guard(*points, [&] { return AsDataPopulation(kernel, *pop.points); });
    return pop;
  }
  const Node exo = node.Field("exogenous");
  if (auto eqs = node.OptionalField("attribute_equations")) {
    for (const Node& e : eqs->Items()) pop.attribute_equations.push_back(DecodeAttributeEquation(e));
  }
  pop.exogenous = DecodeDistBody(exo, {});
  Guard(node, [&] {
    return BuildCanonicalModel(kernel, pop.attribute_equations, *pop.exogenous);
  });
  return pop;
}

MechanismFile DecodeMechanism(const Node& root) {
  root.ExpectKeys({"kind", "name", "description", "mechanism", "populations"});
  const Node mech = root.Field("mechanism").ExpectObject();
  std::optional<BuiltinMechanism> builtin;
  std::optional<MechanismKernel> kernel;
  if (mech.Has("builtin")) {
    builtin = DecodeBuiltin(mech);
    kernel = BuildBuiltin(*builtin);
  } else {
    kernel = DecodeKernelTable(mech);
  }
  MechanismFile file{"", "", builtin, *kernel, {}};
  if (auto name = root.OptionalField("name")) file.name = name->String();
  if (auto d = root.OptionalField("description")) file.description = d->String();
  if (auto pops = root.OptionalField("populations")) {
    pops->ExpectObject();
    for (const auto& item : pops->json->items()) {
      file.populations.emplace_back(item.key(),
                                    DecodePopulation(pops->Child(item.key()), *kernel));
    }
  }
  return file;
}

OrderedJson EncodeMechanism(const MechanismFile& file) {
  OrderedJson out;
  out["kind"] = "mechanism";
  out["name"] = file.name;
  if (!file.description.empty()) out["description"] = file.description;
  OrderedJson mech;
  if (file.builtin) {
    mech["builtin"] = file.builtin->name;
    mech["n"] = file.builtin->n;
    const std::string_view key = BuiltinParameterKey(file.builtin->name);
    if (!key.empty() && file.builtin->parameter) {
      mech[std::string(key)] = FormatRational(*file.builtin->parameter);
    }
  } else {
    const MechanismKernel& k = file.kernel;
    mech["n"] = k.n();
    mech["data_domain"] = k.data_domain().values();
    mech["null"] = k.null_value();
    mech["output_domain"] = k.output_domain().values();
    mech["rows"] = RowsToJson(k.rows());
  }
  out["mechanism"] = std::move(mech);
  if (!file.populations.empty()) {
    OrderedJson pops = OrderedJson::object();
    for (const auto& [name, pop] : file.populations) {
      OrderedJson p;
      if (pop.points) {
        FillDistJson(*pop.points, p["points"]);
      } else {
        if (!pop.attribute_equations.empty()) {
          OrderedJson eqs = OrderedJson::array();
          for (const AttributeEquation& eq : pop.attribute_equations) {
            eqs.push_back(OrderedJson{{"target", eq.target},
                                      {"parents", eq.parents},
                                      {"rows", RowsToJson(eq.rows)}});
          }
          p["attribute_equations"] = std::move(eqs);
        }
        if (pop.exogenous) FillDistJson(*pop.exogenous, p["exogenous"]);
      }
      pops[name] = std::move(p);
    }
    out["populations"] = std::move(pops);
  }
  return out;
}

// --- structural equation models ----------------------------------------------

SemFile DecodeSemBody(const Node& node, bool top_level) {
  if (top_level) {
    node.ExpectKeys({"kind", "name", "description", "variables", "equations", "exogenous", "effect"});
  } else {
    node.ExpectKeys({"name", "description", "variables", "equations", "exogenous", "effect"});
  }
  SemFile file;
  if (auto name = node.OptionalField("name")) file.name = name->String();
  if (auto d = node.OptionalField("description")) file.description = d->String();
  for (const Node& v : node.Field("variables").Items()) {
    v.ExpectKeys({"name", "kind", "domain"});
    const std::string name = v.Field("name").String();
    const Node kind_node = v.Field("kind");
    const std::string kind = kind_node.String();
    VariableKind k;
    if (kind == "exogenous") {
      k = VariableKind::kExogenous;
    } else if (kind == "endogenous") {
      k = VariableKind::kEndogenous;
    } else {
      kind_node.Invalid("variable kind must be \"exogenous\" or \"endogenous\"");
    }
    FiniteDomain domain = DecodeDomain(v.Field("domain"));
    Guard(v, [&] { return file.model.AddVariable(name, k, std::move(domain)); });
  }
  const Node equations = node.Field("equations");
  for (const Node& e : equations.Items()) {
    e.ExpectKeys({"target", "parents", "rows", "function"});
    const std::string target = e.Field("target").String();
    const std::vector<std::string> parents = e.Field("parents").Strings();
    for (std::size_t k = 0; k < parents.size(); ++k) {
      if (!file.model.Find(parents[k])) {
        e.Field("parents").Item(k).Invalid("unknown variable \"" + parents[k] + "\"");
      }
    }
    const auto target_index = file.model.Find(target);
    if (!target_index) e.Field("target").Invalid("unknown variable \"" + target + "\"");
    if (file.model.EquationFor(*target_index) != nullptr) {
      e.Field("target").Invalid("second equation for \"" + target + "\"");
    }
    if (e.Has("rows") == e.Has("function")) {
      e.Invalid("an equation has exactly one of \"rows\" and \"function\"");
    }
    if (auto rows = e.OptionalField("rows")) {
      auto table = DecodeRows(*rows);
      Guard(e, [&] {
        file.model.SetEquation(target, parents, std::move(table));
        return 0;
      });
    } else {
      // One output value per parent row.
      const Node fn = e.Field("function");
      const FiniteDomain& domain = file.model.variable(*target_index).domain;
      std::vector<std::vector<Rational>> table;
      for (const Node& value : fn.Items()) {
        const std::string v = value.String();
        const auto idx = domain.Find(v);
        if (!idx) value.Invalid("value \"" + v + "\" is not in the domain of " + target);
        std::vector<Rational> row(domain.size(), Rational(0));
        row[*idx] = 1;
        table.push_back(std::move(row));
      }
      Guard(e, [&] {
        file.model.SetEquation(target, parents, std::move(table));
        return 0;
      });
    }
  }
  Guard(equations, [&] { return Validate(file.model); });
  if (auto exo = node.OptionalField("exogenous")) {
    file.exogenous = DecodeDistBody(*exo, {});
    Guard(*exo, [&] { return MakeProbabilisticSem(file.model, *file.exogenous); });
  }
  if (auto effect = node.OptionalField("effect")) {
    effect->ExpectKeys({"source", "sink"});
    EffectSpec spec;
    spec.source = effect->Field("source").String();
    spec.sink = effect->Field("sink").Strings();
    if (!file.model.Find(spec.source)) {
      effect->Field("source").Invalid("unknown variable \"" + spec.source + "\"");
    }
    for (std::size_t k = 0; k < spec.sink.size(); ++k) {
      if (!file.model.Find(spec.sink[k])) {
        effect->Field("sink").Item(k).Invalid("unknown variable \"" + spec.sink[k] + "\"");
      }
    }
    file.effect = std::move(spec);
  }
  return file;
}

OrderedJson EncodeSemBody(const SemFile& file) {
  OrderedJson out;
  if (!file.name.empty()) out["name"] = file.name;
  if (!file.description.empty()) out["description"] = file.description;
  OrderedJson sem = SemToJson(file.model);
  out["variables"] = std::move(sem["variables"]);
  out["equations"] = std::move(sem["equations"]);
  if (file.exogenous) FillDistJson(*file.exogenous, out["exogenous"]);
  if (file.effect) {
    out["effect"] = OrderedJson{{"source", file.effect->source}, {"sink", file.effect->sink}};
  }
  return out;
}

CompositionFile DecodeComposition(const Node& root) {
  root.ExpectKeys({"kind", "name", "description", "stage1", "stage2", "interface",
                   "declared_ratios"});
  CompositionFile file;
  if (auto name = root.OptionalField("name")) file.name = name->String();
  if (auto d = root.OptionalField("description")) file.description = d->String();
  file.stage1 = DecodeSemBody(root.Field("stage1"), false);
  file.stage2 = DecodeSemBody(root.Field("stage2"), false);
  const Node iface = root.Field("interface");
  iface.ExpectKeys({"source", "stage1_output", "stage2_output"});
  file.interface.source = iface.Field("source").String();
  file.interface.stage1_output = iface.Field("stage1_output").String();
  file.interface.stage2_output = iface.Field("stage2_output").String();
  const Node declared = root.Field("declared_ratios");
  if (declared.Items().size() != 2) declared.Invalid("declared_ratios has one ratio per stage");
  file.declared1 = declared.Item(0).Ratio();
  file.declared2 = declared.Item(1).Ratio();
  Guard(iface, [&] { return ComposeSequential(file.stage1.model, file.stage2.model, file.interface); });
  return file;
}

OrderedJson EncodeComposition(const CompositionFile& file) {
  OrderedJson out;
  out["kind"] = "composition";
  out["name"] = file.name;
  if (!file.description.empty()) out["description"] = file.description;
  out["stage1"] = EncodeSemBody(file.stage1);
  out["stage2"] = EncodeSemBody(file.stage2);
  out["interface"] = OrderedJson{{"source", file.interface.source},
                                 {"stage1_output", file.interface.stage1_output},
                                 {"stage2_output", file.interface.stage2_output}};
  out["declared_ratios"] = OrderedJson::array({file.declared1.ToString(), file.declared2.ToString()});
  return out;
}

}  // namespace

SourceLocation LocatedJson::Locate(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    if (auto it = locations.find(p); it != locations.end()) return it->second;
    if (p.empty()) return SourceLocation{source, 1, 1};
    p = p.substr(0, p.rfind('/'));
  }
}

LocatedJson ParseLocatedJson(std::string_view text, std::string source) {
  LocatedJson out;
  out.source = std::move(source);
  const char* furthest = text.data();
  LocatingSax sax(text, &furthest, &out);
  TrackingIterator first(text.data(), &furthest);
  TrackingIterator last(text.data() + text.size(), nullptr);
  nlohmann::ordered_json::sax_parse(first, last, &sax);
  return out;
}

std::optional<Rational> DecimalToRational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return std::nullopt;
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 1000) return std::nullopt;
      ++pos;
    }
    if (pos == start) return std::nullopt;
    if (exp_negative) exponent = -exponent;
  }
  if (pos != text.size() || (!seen_point && exponent == 0)) return std::nullopt;
  mpz_class num(digits, 10);
  mpz_class den = 1;
  const long shift = exponent - scale;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift < 0) {
    den = power;
  } else {
    num *= power;
  }
  if (negative) num = -num;
  Rational out(num, den);
  out.canonicalize();
  return out;
}

MechanismKernel BuildBuiltin(const BuiltinMechanism& spec) {
  if (spec.name == "randomized_response") {
    if (!spec.parameter) throw Error(ErrorKind::kInvalidArgument, "randomized_response needs truth_bias");
    return RandomizedResponseKernel(spec.n, *spec.parameter);
  }
  if (spec.name == "geometric_count") {
    if (!spec.parameter) throw Error(ErrorKind::kInvalidArgument, "geometric_count needs ratio");
    return GeometricCountKernel(spec.n, *spec.parameter);
  }
  if (spec.name == "joint_hidden_value") return JointHiddenValueKernel();
  if (spec.name == "hidden_value") return HiddenValueKernel();
  throw Error(ErrorKind::kInvalidArgument, "unknown builtin mechanism \"" + spec.name + "\"");
}

const PopulationSpec* MechanismFile::FindPopulation(std::string_view name) const {
  for (const auto& [key, pop] : populations) {
    if (key == name) return &pop;
  }
  return nullptr;
}

OrderedJson DistToJson(const Dist& dist) {
  OrderedJson out;
  FillDistJson(dist, out);
  return out;
}

OrderedJson SemToJson(const Sem& sem) {
  OrderedJson variables = OrderedJson::array();
  OrderedJson equations = OrderedJson::array();
  for (int v = 0; v < sem.num_variables(); ++v) {
    const Variable& var = sem.variable(v);
    variables.push_back(OrderedJson{
        {"name", var.name},
        {"kind", var.kind == VariableKind::kExogenous ? "exogenous" : "endogenous"},
        {"domain", var.domain.values()}});
  }
  for (int v = 0; v < sem.num_variables(); ++v) {
    const StochasticEquation* eq = sem.EquationFor(v);
    if (eq == nullptr) continue;
    std::vector<std::string> parents;
    for (int p : eq->parents) parents.push_back(sem.variable(p).name);
    equations.push_back(OrderedJson{{"target", sem.variable(v).name},
                                    {"parents", parents},
                                    {"rows", RowsToJson(eq->rows)}});
  }
  return OrderedJson{{"variables", std::move(variables)}, {"equations", std::move(equations)}};
}

ModelFile ParseModel(std::string_view text, const std::string& source) {
  const LocatedJson doc = ParseLocatedJson(text, source);
  const Node root{&doc, &doc.root, ""};
  root.ExpectObject();
  const Node kind_node = root.Field("kind");
  const std::string kind = kind_node.String();
  if (kind == "mechanism") return DecodeMechanism(root);
  if (kind == "sem") return DecodeSemBody(root, true);
  if (kind == "composition") return DecodeComposition(root);
  if (kind == "distribution") {
    DistributionFile file{"", DecodeDistBody(root, {"kind", "name"})};
    if (auto name = root.OptionalField("name")) file.name = name->String();
    return file;
  }
  kind_node.Invalid("unknown kind \"" + kind +
                    "\" (mechanism, sem, composition, distribution)");
}

ModelFile ParseModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot read \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str(), path);
}

std::string_view ModelKind(const ModelFile& file) {
  switch (file.index()) {
    case 0: return "mechanism";
    case 1: return "sem";
    case 2: return "composition";
    default: return "distribution";
  }
}

std::string SerializeModel(const ModelFile& file) {
  OrderedJson out;
  if (const auto* m = std::get_if<MechanismFile>(&file)) {
    out = EncodeMechanism(*m);
  } else if (const auto* s = std::get_if<SemFile>(&file)) {
    out["kind"] = "sem";
    out.update(EncodeSemBody(*s));
  } else if (const auto* c = std::get_if<CompositionFile>(&file)) {
    out = EncodeComposition(*c);
  } else {
    const auto& d = std::get<DistributionFile>(file);
    out["kind"] = "distribution";
    out["name"] = d.name;
    FillDistJson(d.dist, out);
  }
  return out.dump(2) + "\n";
}

}  // namespace dpcausal
