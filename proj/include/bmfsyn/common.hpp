#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmfsyn
{

inline constexpr std::string_view version_string = "0.1.0";

/*! \brief Malformed input text (BLIF syntax, words spec, config file). */
class parse_error : public std::runtime_error
{
public:
  explicit parse_error( const std::string& msg, int line = -1 )
      : std::runtime_error( line >= 0 ? "line " + std::to_string( line ) + ": " + msg : msg ),
        line_( line )
  {
  }

  int line() const { return line_; }

private:
  int line_;
};

/*! \brief Structurally invalid data: bad shapes, bad netlists, broken contracts. */
class validation_error : public std::runtime_error
{
public:
  explicit validation_error( const std::string& msg ) : std::runtime_error( msg ) {}
};

/*! \brief A configured resource limit was exceeded (enumeration size, input cap). */
class budget_error : public std::runtime_error
{
public:
  explicit budget_error( const std::string& msg ) : std::runtime_error( msg ) {}
};

} // namespace bmfsyn
