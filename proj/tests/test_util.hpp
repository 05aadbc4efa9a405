#pragma once

#include "dnls/error.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

namespace testutil {

inline dnls::ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const dnls::Error& e) {
        return e.code();
    }
    FAIL("expected a dnls::Error");
    return dnls::ErrorCode::InvalidArgument;
}

inline std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("dnls_test_" + name);
}

inline std::filesystem::path temp_file(const std::string& name, const std::string& text)
{
    const auto p = temp_path(name);
    std::ofstream(p) << text;
    return p;
}

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace testutil
