package easynotes.model.abstractModel;

import java.util.Comparator;
import easynotes.concerns.Unused;

@Unused
public class UTFStringComparator implements Comparator<String> {
    @Unused
    public int compare(String a, String b) {
        // @Filtering in a comment is not an annotation
        return a.compareToIgnoreCase(b);
    }
}
