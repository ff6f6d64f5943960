#include "planesym/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace planesym {

void JsonWriter::separate() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!has_item_.empty()) {
        if (has_item_.back()) out_ += ",";
        has_item_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += "{";
    has_item_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    has_item_.pop_back();
    out_ += "}";
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += "[";
    has_item_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    has_item_.pop_back();
    out_ += "]";
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    separate();
    write_string(k);
    out_ += ":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
    separate();
    write_string(s);
    return *this;
}

void JsonWriter::write_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\r': out_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out_ += buf;
                } else {
                    out_ += c;
                }
        }
    }
    out_ += '"';
}

JsonWriter& JsonWriter::value(double d) {
    separate();
    if (!std::isfinite(d)) {
        out_ += "null";
        return *this;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    out_ += buf;
    return *this;
}

JsonWriter& JsonWriter::value(long long i) {
    separate();
    out_ += std::to_string(i);
    return *this;
}

JsonWriter& JsonWriter::value(bool b) {
    separate();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::null() {
    separate();
    out_ += "null";
    return *this;
}

}  // namespace planesym
