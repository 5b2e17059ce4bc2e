#pragma once

#include <stdexcept>
#include <string>

namespace ntnsim {

/// Invalid or out-of-range scenario configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string& key, int line, const std::string& what)
        : std::runtime_error(format(key, line, what)),
          m_key(key),
          m_line(line),
          m_detail(what)
    {
    }

    explicit ConfigError(const std::string& what)
        : std::runtime_error(what),
          m_detail(what)
    {
    }

    const std::string& key() const { return m_key; }
    int line() const { return m_line; }
    const std::string& detail() const { return m_detail; }

  private:
    static std::string format(const std::string& key, int line, const std::string& what)
    {
        std::string s;
        if (line > 0)
        {
            s += "line " + std::to_string(line) + ": ";
        }
        if (!key.empty())
        {
            s += "'" + key + "': ";
        }
        return s + what;
    }

    std::string m_key;
    int m_line = 0;
    std::string m_detail;
};

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// Too few samples for the requested statistic.
class StatisticalValidityError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace ntnsim
