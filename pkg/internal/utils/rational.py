from fractions import Fraction


def fraction_str(value: Fraction) -> str:
    """Render a rational as "p/q", keeping the denominator even when it is 1."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse "p/q", a plain integer, or a decimal literal into an exact Fraction.

    Raises:
        ValueError: If the text is not a rational literal or has a zero denominator
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not a rational number: {text!r}") from e
