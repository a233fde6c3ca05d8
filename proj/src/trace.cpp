#include "ssbcs/trace.hpp"

namespace ssbcs {

void append_json_string(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789abcdef";
          out += "\\u00";
          out.push_back(hex[(c >> 4) & 0xf]);
          out.push_back(hex[c & 0xf]);
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

TraceWriter::Line::Line(TraceWriter* w, std::string_view type, std::int64_t t) : w_(w) {
  if (!w_->enabled()) return;
  buf_ = "{\"ev\":";
  append_json_string(buf_, type);
  buf_ += ",\"t\":";
  buf_ += std::to_string(t);
}

TraceWriter::Line::~Line() {
  if (!w_->enabled()) return;
  buf_ += "}\n";
  w_->out_->write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
}

void TraceWriter::Line::key(std::string_view k) {
  buf_ += ',';
  append_json_string(buf_, k);
  buf_ += ':';
}

TraceWriter::Line& TraceWriter::Line::f(std::string_view k, std::int64_t v) {
  if (!w_->enabled()) return *this;
  key(k);
  buf_ += std::to_string(v);
  return *this;
}

TraceWriter::Line& TraceWriter::Line::f(std::string_view k, std::uint64_t v) {
  if (!w_->enabled()) return *this;
  key(k);
  buf_ += std::to_string(v);
  return *this;
}

TraceWriter::Line& TraceWriter::Line::f(std::string_view k, bool v) {
  if (!w_->enabled()) return *this;
  key(k);
  buf_ += v ? "true" : "false";
  return *this;
}

TraceWriter::Line& TraceWriter::Line::f(std::string_view k, std::string_view v) {
  if (!w_->enabled()) return *this;
  key(k);
  append_json_string(buf_, v);
  return *this;
}

TraceWriter::Line& TraceWriter::Line::f(std::string_view k, const std::optional<Tick>& v) {
  if (!w_->enabled()) return *this;
  key(k);
  buf_ += v ? std::to_string(*v) : "null";
  return *this;
}

TraceWriter::Line& TraceWriter::Line::f(std::string_view k, const std::vector<Entry>& v) {
  if (!w_->enabled()) return *this;
  key(k);
  buf_ += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += v[i] ? std::to_string(*v[i]) : "null";
  }
  buf_ += ']';
  return *this;
}

TraceWriter::Line& TraceWriter::Line::f(std::string_view k, const std::vector<int>& v) {
  if (!w_->enabled()) return *this;
  key(k);
  buf_ += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += std::to_string(v[i]);
  }
  buf_ += ']';
  return *this;
}

}  // namespace ssbcs
