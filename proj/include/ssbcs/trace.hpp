#pragma once

#include "ssbcs/ftcore.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ssbcs {

/// Writes one JSON object per line. Fields appear in the order they are added,
/// so identical runs produce identical bytes.
class TraceWriter {
 public:
  TraceWriter() = default;
  explicit TraceWriter(std::ostream* out) : out_(out) {}

  bool enabled() const { return out_ != nullptr; }

  class Line {
   public:
    Line(TraceWriter* w, std::string_view type, std::int64_t t);
    Line(const Line&) = delete;
    Line& operator=(const Line&) = delete;
    ~Line();

    Line& f(std::string_view key, std::int64_t v);
    Line& f(std::string_view key, std::uint64_t v);
    Line& f(std::string_view key, int v) { return f(key, static_cast<std::int64_t>(v)); }
    Line& f(std::string_view key, bool v);
    Line& f(std::string_view key, std::string_view v);
    Line& f(std::string_view key, const char* v) { return f(key, std::string_view(v)); }
    Line& f(std::string_view key, const std::optional<Tick>& v);
    Line& f(std::string_view key, const std::vector<Entry>& v);
    Line& f(std::string_view key, const std::vector<int>& v);

   private:
    void key(std::string_view k);
    TraceWriter* w_;
    std::string buf_;
  };

  Line line(std::string_view type, std::int64_t t) { return Line(this, type, t); }

 private:
  std::ostream* out_ = nullptr;
};

void append_json_string(std::string& out, std::string_view s);

}  // namespace ssbcs
