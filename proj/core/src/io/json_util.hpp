#pragma once

// JSON field helpers shared by the scene and run-config readers.

#include "hmdchan/geometry.hpp"

#include "json.hpp"

#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace hmdchan::io::json_util
{

using nlohmann::json;

[[noreturn]] inline void fail(const std::string &where, const std::string &msg)
{
    throw std::invalid_argument(where + ": " + msg);
}

inline void only_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed)
{
    if (!j.is_object())
        fail(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key()))
            fail(where, "unknown key '" + it.key() + "'");
}

inline double number(const json &j, const std::string &where)
{
    if (!j.is_number())
        fail(where, "expected a number");
    return j.get<double>();
}

template <class T>
T get_or(const json &j, const char *key, const std::string &where, T fallback)
{
    if (!j.contains(key))
        return fallback;
    const json &v = j.at(key);
    const std::string w = where + "." + key;
    if constexpr (std::is_same_v<T, bool>)
    {
        if (!v.is_boolean())
            fail(w, "expected a boolean");
        return v.get<bool>();
    }
    else if constexpr (std::is_integral_v<T>)
    {
        if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0))
            fail(w, "expected a non-negative integer");
        return v.get<T>();
    }
    else
        return static_cast<T>(number(v, w));
}

inline Vec3 vec3(const json &j, const std::string &where)
{
    if (!j.is_array() || j.size() != 3)
        fail(where, "expected [x, y, z]");
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]"), number(j[2], where + "[2]")};
}


} // namespace hmdchan::io::json_util
