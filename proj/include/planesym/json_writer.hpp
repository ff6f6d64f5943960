#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace planesym {

/// Minimal streaming JSON emitter with deterministic output: keys appear
/// in emission order and doubles are rendered with 17 significant digits,
/// so identical inputs serialize byte-identically.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(std::string_view s);
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }
    JsonWriter& value(double d);
    JsonWriter& value(int i) { return value(static_cast<long long>(i)); }
    JsonWriter& value(long long i);
    JsonWriter& value(bool b);
    JsonWriter& null();

    JsonWriter& kv(std::string_view k, std::string_view v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, const char* v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, double v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, int v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, long long v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, bool v) { return key(k).value(v); }

    const std::string& str() const { return out_; }

private:
    void separate();
    void write_string(std::string_view s);
    std::string out_;
    std::vector<bool> has_item_;  // per open scope
    bool pending_key_ = false;
};

}  // namespace planesym
