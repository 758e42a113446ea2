#pragma once

#include <coam/common.hpp>

#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace coam::jsonw {

/// Minimal JSON value with insertion-ordered objects and fixed float
/// formatting (17 significant digits), so serialized reports are
/// byte-identical across runs for identical inputs.
class Value {
  public:
    enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };

    Value() : kind_(Kind::Null) {}
    Value(bool b) : kind_(Kind::Bool), b_(b) {}
    Value(int v) : kind_(Kind::Int), i_(v) {}
    Value(long v) : kind_(Kind::Int), i_(v) {}
    Value(long long v) : kind_(Kind::Int), i_(v) {}
    Value(std::size_t v) : kind_(Kind::Int), i_((long long)v) {}
    Value(double v) : kind_(Kind::Real), d_(v) {}
    Value(const char* s) : kind_(Kind::Str), s_(s) {}
    Value(std::string s) : kind_(Kind::Str), s_(std::move(s)) {}

    static Value array() {
        Value v;
        v.kind_ = Kind::Arr;
        return v;
    }
    static Value object() {
        Value v;
        v.kind_ = Kind::Obj;
        return v;
    }

    Value& push(Value v) {
        arr_.push_back(std::move(v));
        return *this;
    }
    Value& set(std::string key, Value v) {
        obj_.emplace_back(std::move(key), std::move(v));
        return *this;
    }
    bool empty() const { return arr_.empty() && obj_.empty(); }

    template <typename T>
    static Value list(const std::vector<T>& xs) {
        Value v = array();
        for (const auto& x : xs) v.push(Value(x));
        return v;
    }

    std::string dump(int indent = 2) const {
        std::ostringstream os;
        write(os, indent, 0);
        os << "\n";
        return os.str();
    }

  private:
    static void escape(std::ostream& os, const std::string& s) {
        os << '"';
        for (unsigned char c : s) {
            switch (c) {
                case '"': os << "\\\""; break;
                case '\\': os << "\\\\"; break;
                case '\n': os << "\\n"; break;
                case '\t': os << "\\t"; break;
                case '\r': os << "\\r"; break;
                default:
                    if (c < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        os << buf;
                    } else {
                        os << (char)c;
                    }
            }
        }
        os << '"';
    }

    void write(std::ostream& os, int indent, int depth) const {
        std::string pad((std::size_t)indent * (depth + 1), ' ');
        std::string close((std::size_t)indent * depth, ' ');
        switch (kind_) {
            case Kind::Null: os << "null"; break;
            case Kind::Bool: os << (b_ ? "true" : "false"); break;
            case Kind::Int: os << i_; break;
            case Kind::Real: {
                if (!std::isfinite(d_)) {
                    os << "null";
                    break;
                }
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", d_);
                os << buf;
                break;
            }
            case Kind::Str: escape(os, s_); break;
            case Kind::Arr: {
                if (arr_.empty()) {
                    os << "[]";
                    break;
                }
                os << "[";
                for (std::size_t i = 0; i < arr_.size(); ++i) {
                    os << (i ? ",\n" : "\n") << pad;
                    arr_[i].write(os, indent, depth + 1);
                }
                os << "\n" << close << "]";
                break;
            }
            case Kind::Obj: {
                if (obj_.empty()) {
                    os << "{}";
                    break;
                }
                os << "{";
                for (std::size_t i = 0; i < obj_.size(); ++i) {
                    os << (i ? ",\n" : "\n") << pad;
                    escape(os, obj_[i].first);
                    os << ": ";
                    obj_[i].second.write(os, indent, depth + 1);
                }
                os << "\n" << close << "}";
                break;
            }
        }
    }

    Kind kind_;
    bool b_ = false;
    long long i_ = 0;
    double d_ = 0;
    std::string s_;
    std::vector<Value> arr_;
    std::vector<std::pair<std::string, Value>> obj_;
};

}  // namespace coam::jsonw
