#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace riemcurv {

// Minimal JSON emitter with insertion-ordered keys and fixed 17-significant-
// digit floats, so reports diff reproducibly across runs and platforms.
class JsonWriter {
public:
    std::string str() const { return out_; }

    JsonWriter& begin_object() {
        separator();
        out_ += '{';
        has_items_.push_back(false);
        return *this;
    }
    JsonWriter& end_object() {
        out_ += '}';
        has_items_.pop_back();
        return *this;
    }
    JsonWriter& begin_array() {
        separator();
        out_ += '[';
        has_items_.push_back(false);
        return *this;
    }
    JsonWriter& end_array() {
        out_ += ']';
        has_items_.pop_back();
        return *this;
    }

    JsonWriter& key(const std::string& k) {
        separator();
        out_ += '"' + escape(k) + "\":";
        after_key_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        separator();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out_ += buf;
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(long long v) {
        separator();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(bool v) {
        separator();
        out_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        separator();
        out_ += '"' + escape(v) + '"';
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }

    template <typename Iterable>
    JsonWriter& number_array(const Iterable& values) {
        begin_array();
        for (double v : values) value(v);
        return end_array();
    }

private:
    void separator() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (!has_items_.empty()) {
            if (has_items_.back()) out_ += ',';
            has_items_.back() = true;
        }
    }
    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out;
    }

    std::string out_;
    std::vector<bool> has_items_;
    bool after_key_ = false;
};

} // namespace riemcurv
